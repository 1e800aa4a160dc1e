//! Parallel vs sequential throughput of the two data-parallel surfaces: the
//! Monte-Carlo collision oracle and the sweep runner.
//!
//! With default features the dispatched entry points fan out over rayon;
//! rebuilding with `--no-default-features` makes them sequential, so the
//! pairs below then coincide.

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use chim_core::analysis::{mc_oracle, mc_oracle_sequential, AnalysisParams};
use chim_core::config::ExperimentConfig;
use chim_core::sweep::{run_jobs, run_jobs_sequential};

fn mc_params() -> AnalysisParams {
    AnalysisParams::new(40, 0.5, 16, 20, 22, 12, 4, 0).unwrap()
}

fn bench_mc_oracle(c: &mut Criterion) {
    let params = mc_params();
    let mut group = c.benchmark_group("mc_oracle_1e6");
    group.bench_function("dispatched", |b| {
        b.iter(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            black_box(mc_oracle(&params, 1_000_000, &mut rng))
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            black_box(mc_oracle_sequential(&params, 1_000_000, &mut rng))
        })
    });
    group.finish();
}

fn sweep_cfg() -> ExperimentConfig {
    ExperimentConfig {
        omega_sweep: vec![10, 20],
        seeds: (1..=6).collect(),
        superframes: 50,
        ..ExperimentConfig::default()
    }
}

fn bench_sweep(c: &mut Criterion) {
    let cfg = sweep_cfg();
    let mut group = c.benchmark_group("sweep_2x6_jobs");
    group.sample_size(10);
    group.bench_function("dispatched", |b| {
        b.iter(|| black_box(run_jobs(&cfg).unwrap()))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(run_jobs_sequential(&cfg).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_mc_oracle, bench_sweep);
criterion_main!(benches);
