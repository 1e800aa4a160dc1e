//! Seeded experiment sweeps: one job per (scheme, WBAN count, seed), CSV
//! emission, and aggregation into a per-sweep-point summary.
//!
//! Each job derives all of its randomness from its own seed through fixed
//! ChaCha streams, so jobs are independent, order-insensitive, and safe to
//! fan out over the rayon pool; rows are collected back in job order and a
//! re-run byte-reproduces every CSV. The topology stream does not depend on
//! the scheme, so CHIM and the baseline face the same interference topology
//! at a given (WBAN count, seed) and compare pairwise.

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::analysis::{
    collision_probability, mc_oracle, pr_interferer_count, pr_orthogonal_given_interferers,
    pr_two_stage_colliders, AnalysisError, AnalysisParams,
};
use crate::config::{ExperimentConfig, RunScheme, Scheme, TopologyMode};
use crate::exec;
use crate::latin::{build_mols, LatinError, OrthogonalFamily};
use crate::schedule::{chim_setup, zigbee_setup, ScheduleError};
use crate::simcore::{run_chim, run_zigbee, NetworkModel, SimError, SimOptions, SimRun};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("job {scheme} omega={omega} seed={seed}: {source}")]
    Job {
        scheme: RunScheme,
        omega: usize,
        seed: u64,
        #[source]
        source: JobError,
    },
    #[error("latin family construction: {0}")]
    Family(#[from] LatinError),
    #[error("analysis: {0}")]
    Analysis(#[from] AnalysisError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("metrics csv line {line}: {msg}")]
    ParseMetrics { line: usize, msg: String },
}

#[derive(Debug, Error)]
pub enum JobError {
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// One metrics row: `scheme,omega,alpha,seed,apc,aec,dps`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub scheme: RunScheme,
    pub omega: usize,
    pub alpha: f64,
    pub seed: u64,
    pub apc: f64,
    pub aec_mw: f64,
    pub dps: f64,
}

const STREAM_TOPOLOGY: u64 = 0;
const STREAM_CHIM_SETUP: u64 = 1;
const STREAM_ZIGBEE_SETUP: u64 = 2;
const STREAM_CHIM_SIM: u64 = 3;
const STREAM_ZIGBEE_SIM: u64 = 4;

/// Independent ChaCha stream for one role within one job.
fn job_rng(seed: u64, omega: usize, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((omega as u64) << 3) | stream);
    rng
}

/// Builds the Latin family a config calls for: complete set at the smallest
/// covering prime, truncated to `M x K`.
pub fn build_family(cfg: &ExperimentConfig) -> Result<OrthogonalFamily, LatinError> {
    build_mols(cfg.family_order())?.truncate(cfg.channels, cfg.sensors)
}

fn network_for(cfg: &ExperimentConfig, omega: usize, seed: u64) -> NetworkModel {
    let mut rng = job_rng(seed, omega, STREAM_TOPOLOGY);
    match cfg.topology {
        TopologyMode::Probabilistic => {
            NetworkModel::probabilistic(omega, cfg.sensors, cfg.alpha, &mut rng)
        }
        TopologyMode::Geometric => {
            NetworkModel::geometric(omega, cfg.sensors, cfg.area_side_m, cfg.range_m, &mut rng)
        }
    }
}

/// Runs one (scheme, omega, seed) job.
pub fn run_single(
    cfg: &ExperimentConfig,
    family: &OrthogonalFamily,
    scheme: RunScheme,
    omega: usize,
    seed: u64,
    record_log: bool,
) -> Result<SimRun, JobError> {
    let net = network_for(cfg, omega, seed);
    let opts = SimOptions {
        superframes: cfg.superframes,
        inactive_slots: cfg.inactive_slots,
        offsets: cfg.slot_offsets.clone(),
        energy: cfg.energy_model(),
        record_log,
    };
    match scheme {
        RunScheme::Chim => {
            let mut setup_rng = job_rng(seed, omega, STREAM_CHIM_SETUP);
            let schedules = chim_setup(omega, cfg.sensors, cfg.channels, family, &mut setup_rng)?;
            let mut sim_rng = job_rng(seed, omega, STREAM_CHIM_SIM);
            Ok(run_chim(&net, &schedules, &opts, &mut sim_rng)?)
        }
        RunScheme::Zigbee => {
            let mut setup_rng = job_rng(seed, omega, STREAM_ZIGBEE_SETUP);
            let schedules = zigbee_setup(omega, cfg.sensors, cfg.gts_slots, &mut setup_rng);
            let mut sim_rng = job_rng(seed, omega, STREAM_ZIGBEE_SIM);
            Ok(run_zigbee(&net, &schedules, &opts, &mut sim_rng)?)
        }
    }
}

struct SweepPlan<'a> {
    cfg: &'a ExperimentConfig,
    family: OrthogonalFamily,
    jobs: Vec<(RunScheme, usize, u64)>,
}

impl<'a> SweepPlan<'a> {
    fn prepare(cfg: &'a ExperimentConfig) -> Result<Self, SweepError> {
        let family = build_family(cfg)?;
        let mut jobs = Vec::new();
        for &scheme in cfg.scheme.runs() {
            for &omega in &cfg.omega_sweep {
                for &seed in &cfg.seeds {
                    jobs.push((scheme, omega, seed));
                }
            }
        }
        Ok(Self { cfg, family, jobs })
    }

    fn run(&self, i: usize) -> Result<MetricsRow, SweepError> {
        let (scheme, omega, seed) = self.jobs[i];
        let run = run_single(self.cfg, &self.family, scheme, omega, seed, false).map_err(
            |source| SweepError::Job {
                scheme,
                omega,
                seed,
                source,
            },
        )?;
        Ok(MetricsRow {
            scheme,
            omega,
            alpha: self.cfg.alpha,
            seed,
            apc: run.metrics.apc,
            aec_mw: run.metrics.aec_mw,
            dps: run.metrics.dps,
        })
    }
}

/// Runs every job of the sweep, on the rayon pool when the `parallel`
/// feature is enabled. Rows come back in job order either way.
pub fn run_jobs(cfg: &ExperimentConfig) -> Result<Vec<MetricsRow>, SweepError> {
    let plan = SweepPlan::prepare(cfg)?;
    exec::map_indexed(plan.jobs.len(), |i| plan.run(i))
        .into_iter()
        .collect()
}

/// [`run_jobs`] forced onto the sequential path; same rows, same order.
pub fn run_jobs_sequential(cfg: &ExperimentConfig) -> Result<Vec<MetricsRow>, SweepError> {
    let plan = SweepPlan::prepare(cfg)?;
    exec::map_indexed_sequential(plan.jobs.len(), |i| plan.run(i))
        .into_iter()
        .collect()
}

pub fn metrics_csv(rows: &[MetricsRow]) -> String {
    let mut out = String::from("scheme,omega,alpha,seed,apc,aec,dps\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.scheme, r.omega, r.alpha, r.seed, r.apc, r.aec_mw, r.dps
        ));
    }
    out
}

/// Parses a metrics CSV produced by [`metrics_csv`].
pub fn parse_metrics_csv(text: &str) -> Result<Vec<MetricsRow>, SweepError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(SweepError::ParseMetrics {
        line: 1,
        msg: "empty file".into(),
    })?;
    if header.trim() != "scheme,omega,alpha,seed,apc,aec,dps" {
        return Err(SweepError::ParseMetrics {
            line: 1,
            msg: format!("unexpected header `{header}`"),
        });
    }
    let mut rows = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        let [scheme, omega, alpha, seed, apc, aec, dps] = fields[..] else {
            return Err(SweepError::ParseMetrics {
                line,
                msg: format!("expected 7 fields, got {}", fields.len()),
            });
        };
        let scheme = match scheme {
            "chim" => RunScheme::Chim,
            "zigbee" => RunScheme::Zigbee,
            other => {
                return Err(SweepError::ParseMetrics {
                    line,
                    msg: format!("unknown scheme `{other}`"),
                })
            }
        };
        let parse = |name: &str, v: &str| -> Result<f64, SweepError> {
            v.parse().map_err(|_| SweepError::ParseMetrics {
                line,
                msg: format!("bad {name} `{v}`"),
            })
        };
        rows.push(MetricsRow {
            scheme,
            omega: omega.parse().map_err(|_| SweepError::ParseMetrics {
                line,
                msg: format!("bad omega `{omega}`"),
            })?,
            alpha: parse("alpha", alpha)?,
            seed: seed.parse().map_err(|_| SweepError::ParseMetrics {
                line,
                msg: format!("bad seed `{seed}`"),
            })?,
            apc: parse("apc", apc)?,
            aec_mw: parse("aec", aec)?,
            dps: parse("dps", dps)?,
        });
    }
    Ok(rows)
}

/// Mean and sample standard deviation per metric over a sweep point's seeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeStats {
    pub runs: usize,
    pub apc_mean: f64,
    pub apc_std: f64,
    pub aec_mean: f64,
    pub aec_std: f64,
    pub dps_mean: f64,
    pub dps_std: f64,
}

/// CHIM-over-baseline improvements: fraction of the baseline value removed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Improvement {
    pub apc: f64,
    pub aec: f64,
    pub dps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryRow {
    pub omega: usize,
    pub chim: Option<SchemeStats>,
    pub zigbee: Option<SchemeStats>,
    pub improvement: Option<Improvement>,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn stats_for(rows: &[&MetricsRow]) -> SchemeStats {
    let apc: Vec<f64> = rows.iter().map(|r| r.apc).collect();
    let aec: Vec<f64> = rows.iter().map(|r| r.aec_mw).collect();
    let dps: Vec<f64> = rows.iter().map(|r| r.dps).collect();
    let (apc_mean, apc_std) = mean_std(&apc);
    let (aec_mean, aec_std) = mean_std(&aec);
    let (dps_mean, dps_std) = mean_std(&dps);
    SchemeStats {
        runs: rows.len(),
        apc_mean,
        apc_std,
        aec_mean,
        aec_std,
        dps_mean,
        dps_std,
    }
}

/// Removed fraction of the baseline value; 0 when there was nothing to
/// remove (both means zero).
fn improvement_of(chim: f64, zigbee: f64) -> f64 {
    if zigbee == 0.0 {
        0.0
    } else {
        (zigbee - chim) / zigbee
    }
}

/// Aggregates metrics rows into one row per omega, ascending.
pub fn summarize(rows: &[MetricsRow]) -> Vec<SummaryRow> {
    let mut omegas: Vec<usize> = rows.iter().map(|r| r.omega).collect();
    omegas.sort_unstable();
    omegas.dedup();
    omegas
        .into_iter()
        .map(|omega| {
            let of_scheme = |scheme: RunScheme| {
                let subset: Vec<&MetricsRow> = rows
                    .iter()
                    .filter(|r| r.omega == omega && r.scheme == scheme)
                    .collect();
                (!subset.is_empty()).then(|| stats_for(&subset))
            };
            let chim = of_scheme(RunScheme::Chim);
            let zigbee = of_scheme(RunScheme::Zigbee);
            let improvement = match (&chim, &zigbee) {
                (Some(c), Some(z)) => Some(Improvement {
                    apc: improvement_of(c.apc_mean, z.apc_mean),
                    aec: improvement_of(c.aec_mean, z.aec_mean),
                    dps: improvement_of(c.dps_mean, z.dps_mean),
                }),
                _ => None,
            };
            SummaryRow {
                omega,
                chim,
                zigbee,
                improvement,
            }
        })
        .collect()
}

pub fn summary_csv(rows: &[SummaryRow], scheme: Scheme) -> String {
    let mut header = String::from("omega");
    if scheme != Scheme::Zigbee {
        header.push_str(
            ",apc_chim_mean,apc_chim_std,aec_chim_mean,aec_chim_std,dps_chim_mean,dps_chim_std",
        );
    }
    if scheme != Scheme::Chim {
        header.push_str(
            ",apc_zigbee_mean,apc_zigbee_std,aec_zigbee_mean,aec_zigbee_std,dps_zigbee_mean,dps_zigbee_std",
        );
    }
    if scheme == Scheme::Both {
        header.push_str(",apc_improvement,aec_improvement,dps_improvement");
    }
    header.push('\n');
    let mut out = header;
    for row in rows {
        out.push_str(&row.omega.to_string());
        let mut push_stats = |stats: &Option<SchemeStats>| {
            if let Some(s) = stats {
                out.push_str(&format!(
                    ",{},{},{},{},{},{}",
                    s.apc_mean, s.apc_std, s.aec_mean, s.aec_std, s.dps_mean, s.dps_std
                ));
            }
        };
        if scheme != Scheme::Zigbee {
            push_stats(&row.chim);
        }
        if scheme != Scheme::Chim {
            push_stats(&row.zigbee);
        }
        if scheme == Scheme::Both {
            if let Some(imp) = &row.improvement {
                out.push_str(&format!(",{},{},{}", imp.apc, imp.aec, imp.dps));
            }
        }
        out.push('\n');
    }
    out
}

/// Files written by a sweep plus the in-memory rows.
#[derive(Debug)]
pub struct SweepOutput {
    pub rows: Vec<MetricsRow>,
    pub summary: Vec<SummaryRow>,
    pub metrics_path: PathBuf,
    pub summary_path: PathBuf,
    pub trace_path: Option<PathBuf>,
}

fn write_file(path: PathBuf, contents: &str) -> Result<PathBuf, SweepError> {
    std::fs::write(&path, contents).map_err(|source| SweepError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Runs the whole sweep and writes `metrics.csv`, `summary.csv`, and (when
/// a trace target is configured) `trace.csv` into the output directory.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepOutput, SweepError> {
    let rows = run_jobs(cfg)?;
    let summary = summarize(&rows);
    std::fs::create_dir_all(&cfg.output_dir).map_err(|source| SweepError::Io {
        path: cfg.output_dir.clone(),
        source,
    })?;
    let metrics_path = write_file(cfg.output_dir.join("metrics.csv"), &metrics_csv(&rows))?;
    let summary_path = write_file(
        cfg.output_dir.join("summary.csv"),
        &summary_csv(&summary, cfg.scheme),
    )?;
    let trace_path = match cfg.trace {
        Some(target) => {
            let family = build_family(cfg)?;
            let run = run_single(cfg, &family, target.scheme, target.omega, target.seed, true)
                .map_err(|source| SweepError::Job {
                    scheme: target.scheme,
                    omega: target.omega,
                    seed: target.seed,
                    source,
                })?;
            Some(write_file(
                cfg.output_dir.join("trace.csv"),
                &crate::simcore::write_log_csv(&run.log),
            )?)
        }
        None => None,
    };
    Ok(SweepOutput {
        rows,
        summary,
        metrics_path,
        summary_path,
        trace_path,
    })
}

/// CHIM schedule dump for one (omega, seed):
/// `wban_id,sensor_id,dfc,tdma_slot,bkc,bkts`, using the same rng stream the
/// sweep itself would use for that job.
pub fn schedule_csv(
    cfg: &ExperimentConfig,
    omega: usize,
    seed: u64,
) -> Result<String, SweepError> {
    let family = build_family(cfg)?;
    let mut rng = job_rng(seed, omega, STREAM_CHIM_SETUP);
    let schedules = chim_setup(omega, cfg.sensors, cfg.channels, &family, &mut rng).map_err(
        |source| SweepError::Job {
            scheme: RunScheme::Chim,
            omega,
            seed,
            source: source.into(),
        },
    )?;
    let mut out = String::from("wban_id,sensor_id,dfc,tdma_slot,bkc,bkts\n");
    for s in &schedules {
        for sensor in 1..=s.sensors() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.wban_id,
                sensor,
                s.default_channel,
                s.tdma_slot_of(sensor),
                s.backup_channel_of(sensor),
                s.backup_slot_of(sensor)
            ));
        }
    }
    Ok(out)
}

/// Analytical model evaluation as CSV:
/// `P,alpha,M,K,m,x,y,t,pr_x,pr_y_given_x,q,pr_t_imb,q_mc,q_mc_stderr`.
///
/// `P` is the surrounding-sensor count at the largest swept WBAN count;
/// the interferer count `x` walks a nine-point grid over `[0, min(P, Z)]`,
/// with `y` at the hypergeometric mean and `t` at the expected two-stage
/// collider count for each `x`.
pub fn analysis_csv(cfg: &ExperimentConfig) -> Result<String, SweepError> {
    let sensors = cfg.sensors;
    let channels = cfg.channels;
    let family_size = cfg.family_order() - 1;
    let patterns = sensors * family_size;
    let max_omega = *cfg.omega_sweep.iter().max().expect("validated non-empty");
    let surrounding = (max_omega - 1) * sensors;
    let x_max = surrounding.min(patterns);

    let mut grid: Vec<usize> = (0..=8).map(|i| x_max * i / 8).collect();
    grid.dedup();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seeds[0]);
    let mut out = String::from("P,alpha,M,K,m,x,y,t,pr_x,pr_y_given_x,q,pr_t_imb,q_mc,q_mc_stderr\n");
    for x in grid {
        let y_lo = x.saturating_sub(patterns - sensors);
        let y_hi = x.min(sensors);
        let y = ((x * sensors) as f64 / patterns as f64)
            .round()
            .clamp(y_lo as f64, y_hi as f64) as usize;
        let mut params = AnalysisParams::new(
            surrounding,
            cfg.alpha,
            channels,
            sensors,
            family_size,
            x,
            y,
            0,
        )?;
        let q = collision_probability(&params);
        params.two_stage_colliders =
            ((sensors as f64 * q * q).round() as usize).min(sensors);
        let mc = mc_oracle(&params, cfg.analysis_samples, &mut rng);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            surrounding,
            cfg.alpha,
            channels,
            sensors,
            family_size,
            x,
            y,
            params.two_stage_colliders,
            pr_interferer_count(&params),
            pr_orthogonal_given_interferers(&params)?,
            q,
            pr_two_stage_colliders(&params, q),
            mc.estimate,
            mc.std_err
        ));
    }
    Ok(out)
}
