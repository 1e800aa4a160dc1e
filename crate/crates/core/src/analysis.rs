//! Closed-form collision-probability model for a tagged sensor, evaluated
//! exactly, plus an independent Monte-Carlo estimator for cross-checking.
//!
//! The chain: the number of surrounding sensors transmitting concurrently
//! with the tagged sensor is binomial-weighted
//! ([`pr_interferer_count`]); conditioned on that count, the number whose
//! symbol patterns come from rectangles orthogonal to the tagged WBAN's is
//! hypergeometric ([`pr_orthogonal_given_interferers`]); the remaining
//! non-orthogonal interferers each hit the tagged slot independently, giving
//! the single-transmission collision probability `Q`
//! ([`collision_probability`]); and a sensor colliding in both the data
//! part and the backup part is a `Q²` event, binomial over the WBAN's
//! sensors ([`pr_two_stage_colliders`]).
//!
//! Binomial coefficients are computed in exact big-integer arithmetic; only
//! the final division/products are floating point.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("domain error: {0}")]
    Domain(String),
}

/// All model parameters in one place.
///
/// `surrounding` is the number of sensors of other WBANs around the tagged
/// sensor, each independently within range with probability `alpha`;
/// `interferers` of them transmit in the tagged slot, of which
/// `orthogonal_interferers` use symbol patterns orthogonal to the tagged
/// WBAN's rectangle. `two_stage_colliders` is the count queried by the
/// two-stage (data part and backup part) collision distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisParams {
    pub surrounding: usize,
    pub alpha: f64,
    pub channels: usize,
    pub sensors: usize,
    pub family_size: usize,
    pub interferers: usize,
    pub orthogonal_interferers: usize,
    pub two_stage_colliders: usize,
}

impl AnalysisParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        surrounding: usize,
        alpha: f64,
        channels: usize,
        sensors: usize,
        family_size: usize,
        interferers: usize,
        orthogonal_interferers: usize,
        two_stage_colliders: usize,
    ) -> Result<Self, AnalysisError> {
        let params = Self {
            surrounding,
            alpha,
            channels,
            sensors,
            family_size,
            interferers,
            orthogonal_interferers,
            two_stage_colliders,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(AnalysisError::InvalidParams(format!(
                "alpha {} outside [0, 1]",
                self.alpha
            )));
        }
        if self.channels == 0 || self.sensors == 0 || self.family_size == 0 {
            return Err(AnalysisError::InvalidParams(
                "channels, sensors, and family_size must be positive".into(),
            ));
        }
        if self.orthogonal_interferers > self.interferers {
            return Err(AnalysisError::InvalidParams(format!(
                "orthogonal interferers {} exceed interferers {}",
                self.orthogonal_interferers, self.interferers
            )));
        }
        if self.interferers > self.surrounding {
            return Err(AnalysisError::InvalidParams(format!(
                "interferers {} exceed surrounding sensors {}",
                self.interferers, self.surrounding
            )));
        }
        if self.two_stage_colliders > self.sensors {
            return Err(AnalysisError::InvalidParams(format!(
                "two-stage colliders {} exceed sensors {}",
                self.two_stage_colliders, self.sensors
            )));
        }
        Ok(())
    }

    /// Total symbol patterns in the family.
    pub fn symbol_patterns(&self) -> usize {
        self.sensors * self.family_size
    }

    /// Interferers whose patterns are not orthogonal to the tagged WBAN's.
    pub fn colliding_interferers(&self) -> usize {
        self.interferers - self.orthogonal_interferers
    }

    /// Transmission slot pool size for the tagged sensor.
    pub fn slot_pool(&self) -> usize {
        self.channels.min(self.sensors)
    }
}

/// Exact binomial coefficient; zero when `k > n`.
fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut res = BigUint::one();
    for i in 0..k {
        res = res * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    res
}

/// `num / den` for `num <= den`, truncating both to 512-bit precision when
/// they exceed f64's exponent range.
fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    debug_assert!(!den.is_zero());
    debug_assert!(num <= den);
    let bits = den.bits();
    if bits <= 1000 {
        num.to_f64().unwrap_or(0.0) / den.to_f64().unwrap_or(f64::INFINITY)
    } else {
        let shift = bits - 512;
        (num >> shift).to_f64().unwrap_or(0.0) / (den >> shift).to_f64().unwrap_or(f64::INFINITY)
    }
}

/// `C(n, k) * s^k * f^(n-k)` with the coefficient exact when it fits f64,
/// and an interleaved product otherwise to keep intermediates bounded.
fn weighted_binomial(n: usize, k: usize, s: f64, f: f64) -> f64 {
    debug_assert!(k <= n);
    let coeff = binomial(n as u64, k as u64).to_f64().unwrap_or(f64::INFINITY);
    if coeff.is_finite() {
        return coeff * s.powi(k as i32) * f.powi((n - k) as i32);
    }
    if k == 0 {
        return f.powi(n as i32);
    }
    let spread = (n - k) as f64 / k as f64;
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (n - i) as f64 / (i + 1) as f64 * s * f.powf(spread);
    }
    acc
}

/// Probability that exactly `interferers` of the surrounding sensors
/// transmit in the tagged sensor's slot:
/// `C(P, x) * alpha^x * (1-alpha)^(P-x) * (min(M,K)/K)^x`.
///
/// The `interferers <= surrounding` domain requirement is enforced by
/// [`AnalysisParams`].
pub fn pr_interferer_count(params: &AnalysisParams) -> f64 {
    pr_interferer_count_raw(
        params.surrounding,
        params.alpha,
        params.channels,
        params.sensors,
        params.interferers,
    )
}

fn pr_interferer_count_raw(
    surrounding: usize,
    alpha: f64,
    channels: usize,
    sensors: usize,
    interferers: usize,
) -> f64 {
    let slot_ratio = channels.min(sensors) as f64 / sensors as f64;
    weighted_binomial(surrounding, interferers, alpha * slot_ratio, 1.0 - alpha)
}

/// Probability that exactly `orthogonal_interferers` of the `interferers`
/// drew symbol patterns orthogonal to the tagged WBAN's rectangle:
/// hypergeometric `C(K, y) * C(Z-K, x-y) / C(Z, x)` over the `Z = K*m`
/// patterns of the family.
pub fn pr_orthogonal_given_interferers(params: &AnalysisParams) -> Result<f64, AnalysisError> {
    let x = params.interferers;
    let y = params.orthogonal_interferers;
    let z = params.symbol_patterns();
    let k = params.sensors;
    if x > z {
        return Err(AnalysisError::Domain(format!(
            "interferers {x} exceed the {z} symbol patterns"
        )));
    }
    if x - y > z - k {
        return Err(AnalysisError::Domain(format!(
            "{} non-orthogonal interferers exceed the {} non-orthogonal patterns",
            x - y,
            z - k
        )));
    }
    Ok(pr_orthogonal_raw(k, z, x, y))
}

fn pr_orthogonal_raw(k: usize, z: usize, x: usize, y: usize) -> f64 {
    let num = binomial(k as u64, y as u64) * binomial((z - k) as u64, (x - y) as u64);
    let den = binomial(z as u64, x as u64);
    ratio_to_f64(&num, &den)
}

/// Probability `Q` that the tagged transmission collides given `x - y`
/// non-orthogonal interferers: `1 - (1 - 1/min(M,K))^(x-y)`.
pub fn collision_probability(params: &AnalysisParams) -> f64 {
    collision_probability_raw(params.slot_pool(), params.colliding_interferers())
}

fn collision_probability_raw(slot_pool: usize, colliding: usize) -> f64 {
    1.0 - (1.0 - 1.0 / slot_pool as f64).powi(colliding as i32)
}

/// Probability that exactly `two_stage_colliders` sensors of the WBAN
/// collide in both stages: `C(K, t) * (Q^2)^t * (1 - Q^2)^(K-t)`.
///
/// `q` must come from [`collision_probability`] or lie in `[0, 1]`.
pub fn pr_two_stage_colliders(params: &AnalysisParams, q: f64) -> f64 {
    assert!((0.0..=1.0).contains(&q), "q must be a probability");
    let q2 = q * q;
    weighted_binomial(params.sensors, params.two_stage_colliders, q2, 1.0 - q2)
}

/// The same distribution with `Q` substituted through, written as the
/// expanded product over `beta = 1 - 1/min(M,K)`. Algebraically identical to
/// [`pr_two_stage_colliders`]; kept as a self-check of the derivation.
pub fn pr_two_stage_colliders_expanded(params: &AnalysisParams) -> f64 {
    let k = params.sensors;
    let t = params.two_stage_colliders;
    let d = params.colliding_interferers();
    let beta = 1.0 - 1.0 / params.slot_pool() as f64;
    let beta_d = beta.powi(d as i32);
    let coeff = binomial(k as u64, t as u64).to_f64().unwrap_or(f64::INFINITY);
    coeff
        * beta.powi((d * (k - t)) as i32)
        * (2.0 - beta_d).powi((k - t) as i32)
        * (1.0 - beta_d).powi(2 * t as i32)
}

/// Expected number of sensors that collide in the data-collection part,
/// closed as `K * Q` under per-sensor independence.
pub fn expected_first_stage_colliders(params: &AnalysisParams) -> f64 {
    params.sensors as f64 * collision_probability(params)
}

/// Network-level collision probability obtained by numerically summing the
/// product chain over all interferer counts and orthogonal splits. This
/// composition is a convenience on top of the per-event formulas, which are
/// conditional; the interferer-count weights are used exactly as defined
/// (they need not sum to one).
pub fn marginal_collision_probability(params: &AnalysisParams) -> Result<f64, AnalysisError> {
    let z = params.symbol_patterns();
    let k = params.sensors;
    if params.surrounding > z {
        return Err(AnalysisError::Domain(format!(
            "surrounding sensors {} exceed the {} symbol patterns; the composition is undefined",
            params.surrounding, z
        )));
    }
    let mut total = 0.0;
    for x in 0..=params.surrounding {
        let px = pr_interferer_count_raw(
            params.surrounding,
            params.alpha,
            params.channels,
            params.sensors,
            x,
        );
        let y_lo = x.saturating_sub(z - k);
        let y_hi = x.min(k);
        let mut conditional = 0.0;
        for y in y_lo..=y_hi {
            conditional += pr_orthogonal_raw(k, z, x, y)
                * collision_probability_raw(params.slot_pool(), x - y);
        }
        total += px * conditional;
    }
    Ok(total)
}

/// A Monte-Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_err: f64,
    pub samples: u64,
}

/// Samples per independently seeded block; fixed so that the parallel and
/// sequential paths partition identically.
const MC_BLOCK: u64 = 1 << 14;

/// Sampling plan shared by the parallel and sequential paths: the block
/// partition and per-block seeds depend only on the inputs, so both paths
/// produce the same hit counts.
#[derive(Clone, Copy)]
struct McPlan {
    pool: usize,
    colliding: usize,
    base: u64,
    samples: u64,
    blocks: usize,
}

impl McPlan {
    fn new(params: &AnalysisParams, samples: u64, rng: &mut impl Rng) -> Self {
        assert!(samples >= 1, "at least one sample required");
        Self {
            pool: params.slot_pool(),
            colliding: params.colliding_interferers(),
            base: rng.next_u64(),
            samples,
            blocks: samples.div_ceil(MC_BLOCK) as usize,
        }
    }

    fn block_hits(&self, block: usize) -> u64 {
        let lo = block as u64 * MC_BLOCK;
        let n = MC_BLOCK.min(self.samples - lo);
        mc_block_hits(self.pool, self.colliding, self.base, block as u64, n)
    }

    fn finish(&self, hits: u64) -> McEstimate {
        let estimate = hits as f64 / self.samples as f64;
        McEstimate {
            estimate,
            std_err: (estimate * (1.0 - estimate) / self.samples as f64).sqrt(),
            samples: self.samples,
        }
    }
}

/// Monte-Carlo cross-check of [`collision_probability`]: each of the
/// `x - y` non-orthogonal interferers lands on a uniform slot among
/// `min(M, K)`; the tagged transmission collides iff any of them hits its
/// slot. Returns the empirical collision fraction and its standard error.
///
/// Sample blocks are sharded over the rayon pool when the `parallel`
/// feature is enabled; the estimate is identical either way.
pub fn mc_oracle(params: &AnalysisParams, samples: u64, rng: &mut impl Rng) -> McEstimate {
    let plan = McPlan::new(params, samples, rng);
    if plan.colliding == 0 {
        return plan.finish(0);
    }
    let hits = exec::map_indexed(plan.blocks, |b| plan.block_hits(b));
    plan.finish(hits.into_iter().sum())
}

/// [`mc_oracle`] forced onto the sequential path regardless of features.
pub fn mc_oracle_sequential(
    params: &AnalysisParams,
    samples: u64,
    rng: &mut impl Rng,
) -> McEstimate {
    let plan = McPlan::new(params, samples, rng);
    if plan.colliding == 0 {
        return plan.finish(0);
    }
    let hits = exec::map_indexed_sequential(plan.blocks, |b| plan.block_hits(b));
    plan.finish(hits.into_iter().sum())
}

fn mc_block_hits(pool: usize, colliding: usize, base: u64, stream: u64, samples: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(stream);
    let mut hits = 0u64;
    for _ in 0..samples {
        let mut hit = false;
        for _ in 0..colliding {
            if rng.random_range(0..pool) == 0 {
                hit = true;
                break;
            }
        }
        hits += u64::from(hit);
    }
    hits
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(
        surrounding: usize,
        alpha: f64,
        channels: usize,
        sensors: usize,
        family_size: usize,
        interferers: usize,
        orthogonal: usize,
        colliders: usize,
    ) -> AnalysisParams {
        AnalysisParams::new(
            surrounding,
            alpha,
            channels,
            sensors,
            family_size,
            interferers,
            orthogonal,
            colliders,
        )
        .unwrap()
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        if b == 0.0 {
            a.abs()
        } else {
            ((a - b) / b).abs()
        }
    }

    mod exact_oracle {
        //! Exact rational re-evaluation of the formulas, kept independent of
        //! the implementation path (full-factorial rationals, no shared
        //! helpers). Used to pin golden values.
        use num_bigint::BigInt;
        use num_rational::BigRational;
        use num_traits::{One, ToPrimitive};

        fn factorial(n: usize) -> BigInt {
            (1..=n as u64).map(BigInt::from).product::<BigInt>().max(BigInt::one())
        }

        fn choose(n: usize, k: usize) -> BigRational {
            if k > n {
                return BigRational::from(BigInt::from(0));
            }
            BigRational::new(factorial(n), factorial(k) * factorial(n - k))
        }

        fn pow(base: BigRational, exp: usize) -> BigRational {
            let mut acc = BigRational::one();
            for _ in 0..exp {
                acc *= base.clone();
            }
            acc
        }

        pub fn pr_x(p: usize, a_num: i64, a_den: i64, m: usize, k: usize, x: usize) -> f64 {
            let alpha = BigRational::new(BigInt::from(a_num), BigInt::from(a_den));
            let ratio = BigRational::new(BigInt::from(m.min(k) as u64), BigInt::from(k as u64));
            let one = BigRational::one();
            (choose(p, x)
                * pow(alpha.clone(), x)
                * pow(one - alpha, p - x)
                * pow(ratio, x))
            .to_f64()
            .unwrap()
        }

        pub fn pr_ygx(k: usize, z: usize, x: usize, y: usize) -> f64 {
            (choose(k, y) * choose(z - k, x - y) / choose(z, x))
                .to_f64()
                .unwrap()
        }

        pub fn q(pool: usize, d: usize) -> f64 {
            let beta = BigRational::new(BigInt::from((pool - 1) as u64), BigInt::from(pool as u64));
            (BigRational::one() - pow(beta, d)).to_f64().unwrap()
        }
    }

    #[test]
    fn interferer_count_matches_frozen_exact_values() {
        // Pinned from the exact rational oracle.
        let p = params(10, 0.3, 16, 20, 16, 3, 0, 0);
        assert!(rel_err(pr_interferer_count(&p), 0.136615901184) < 1e-12);

        let p = params(10, 0.3, 16, 20, 16, 0, 0, 0);
        assert!(rel_err(pr_interferer_count(&p), 0.0282475249) < 1e-12);

        // Forced single interferer with a full channel set.
        let p = params(1, 1.0, 20, 20, 16, 1, 0, 0);
        assert!(rel_err(pr_interferer_count(&p), 1.0) < 1e-15);
    }

    #[test]
    fn interferer_count_agrees_with_exact_oracle_on_a_grid() {
        for (p_count, x) in [(5usize, 0usize), (5, 3), (10, 7), (40, 13), (40, 40)] {
            let expected = exact_oracle::pr_x(p_count, 3, 10, 16, 20, x);
            let got = pr_interferer_count(&params(p_count, 0.3, 16, 20, 16, x, 0, 0));
            assert!(rel_err(got, expected) < 1e-12, "P={p_count} x={x}");
        }
    }

    #[test]
    fn params_reject_out_of_domain_combinations() {
        assert!(AnalysisParams::new(5, 0.3, 16, 20, 16, 6, 0, 0).is_err());
        assert!(AnalysisParams::new(5, 0.3, 16, 20, 16, 3, 4, 0).is_err());
        assert!(AnalysisParams::new(5, 1.5, 16, 20, 16, 3, 0, 0).is_err());
        assert!(AnalysisParams::new(5, 0.3, 16, 20, 16, 3, 0, 21).is_err());
    }

    #[test]
    fn orthogonal_split_matches_frozen_exact_value() {
        let p = params(5, 0.3, 16, 20, 16, 5, 2, 0);
        assert_eq!(p.symbol_patterns(), 320);
        let got = pr_orthogonal_given_interferers(&p).unwrap();
        assert!(rel_err(got, 0.031237637266149813) < 1e-12);
        assert!(rel_err(got, exact_oracle::pr_ygx(20, 320, 5, 2)) < 1e-12);
    }

    #[test]
    fn orthogonal_split_normalizes_over_its_support() {
        for (sensors, family, x) in [(20usize, 16usize, 5usize), (20, 2, 13), (4, 1, 3), (10, 3, 25)] {
            let z = sensors * family;
            let lo = x.saturating_sub(z - sensors);
            let hi = x.min(sensors);
            let mut sum = 0.0;
            for y in lo..=hi {
                let p = params(x, 0.5, 16, sensors, family, x, y, 0);
                sum += pr_orthogonal_given_interferers(&p).unwrap();
            }
            assert!((sum - 1.0).abs() < 1e-9, "K={sensors} m={family} x={x}: {sum}");
        }
    }

    #[test]
    fn orthogonal_split_trivial_and_domain_cases() {
        let p = params(0, 0.3, 16, 20, 16, 0, 0, 0);
        assert_eq!(pr_orthogonal_given_interferers(&p).unwrap(), 1.0);

        // More interferers than symbol patterns.
        let p = params(50, 0.3, 16, 4, 2, 9, 0, 0);
        assert!(matches!(
            pr_orthogonal_given_interferers(&p),
            Err(AnalysisError::Domain(_))
        ));

        // More non-orthogonal interferers than non-orthogonal patterns.
        let p = params(50, 0.3, 16, 4, 2, 7, 2, 0);
        assert!(matches!(
            pr_orthogonal_given_interferers(&p),
            Err(AnalysisError::Domain(_))
        ));
    }

    #[test]
    fn collision_probability_closed_forms() {
        let p = params(10, 0.3, 16, 20, 16, 4, 4, 0);
        assert_eq!(collision_probability(&p), 0.0);

        let p = params(10, 0.3, 16, 20, 16, 5, 4, 0);
        assert!(rel_err(collision_probability(&p), 0.0625) < 1e-15);

        let p = params(10, 0.3, 16, 20, 16, 8, 0, 0);
        assert!(rel_err(collision_probability(&p), 0.4032805261667818) < 1e-12);
        assert!(rel_err(collision_probability(&p), exact_oracle::q(16, 8)) < 1e-12);
    }

    #[test]
    fn collision_probability_is_monotone() {
        let q_of = |pool: usize, d: usize| collision_probability_raw(pool, d);
        for d in 0..20 {
            assert!(q_of(16, d) <= q_of(16, d + 1));
        }
        for pool in 2..30 {
            assert!(q_of(pool, 5) >= q_of(pool + 1, 5));
        }
        for d in 0..10 {
            let q = q_of(12, d);
            assert!((0.0..=1.0).contains(&q));
        }
    }

    #[test]
    fn two_stage_distribution_matches_frozen_value_and_edges() {
        let p = params(10, 0.3, 16, 20, 16, 2, 0, 2);
        assert!(rel_err(pr_two_stage_colliders(&p, 0.2), 0.14579941395327686) < 1e-12);

        let p0 = params(10, 0.3, 16, 20, 16, 0, 0, 0);
        assert_eq!(pr_two_stage_colliders(&p0, 0.0), 1.0);

        let pk = params(10, 0.3, 16, 20, 16, 0, 0, 20);
        assert_eq!(pr_two_stage_colliders(&pk, 1.0), 1.0);
    }

    #[test]
    fn compact_and_expanded_two_stage_forms_agree() {
        for d in [0usize, 1, 3, 8, 20] {
            for t in [0usize, 1, 2, 10, 20] {
                for (channels, sensors) in [(16usize, 20usize), (8, 20), (16, 12)] {
                    let p = params(40, 0.3, channels, sensors, 16, d, 0, t.min(sensors));
                    let q = collision_probability(&p);
                    let compact = pr_two_stage_colliders(&p, q);
                    let expanded = pr_two_stage_colliders_expanded(&p);
                    assert!(
                        rel_err(compact, expanded) < 1e-12,
                        "d={d} t={t} M={channels} K={sensors}: {compact} vs {expanded}"
                    );
                }
            }
        }
    }

    #[test]
    fn two_stage_distribution_normalizes() {
        let q: f64 = 0.37;
        let mut sum = 0.0;
        for t in 0..=20 {
            let p = params(10, 0.3, 16, 20, 16, 0, 0, t);
            sum += pr_two_stage_colliders(&p, q);
        }
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn expected_colliders_closures() {
        let p = params(10, 0.3, 16, 20, 16, 3, 3, 0);
        assert_eq!(expected_first_stage_colliders(&p), 0.0);

        let p = params(10, 0.3, 1, 20, 16, 1, 0, 0);
        assert_eq!(expected_first_stage_colliders(&p), 20.0);

        let p = params(10, 0.3, 16, 20, 16, 4, 0, 0);
        assert!(rel_err(expected_first_stage_colliders(&p), 4.55047607421875) < 1e-12);
    }

    #[test]
    fn mc_oracle_zero_interferers_is_exactly_zero() {
        let p = params(10, 0.3, 16, 20, 16, 3, 3, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let est = mc_oracle(&p, 1000, &mut rng);
        assert_eq!(est.estimate, 0.0);
        assert_eq!(est.std_err, 0.0);
    }

    #[test]
    fn mc_oracle_single_interferer_matches_closed_form() {
        let p = params(10, 1.0, 16, 20, 16, 1, 0, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let est = mc_oracle(&p, 1_000_000, &mut rng);
        assert!((est.estimate - 0.0625).abs() <= 3.0 * est.std_err, "{est:?}");
    }

    #[test]
    fn mc_oracle_parallel_and_sequential_agree_exactly() {
        let p = params(20, 0.5, 16, 20, 16, 9, 2, 0);
        let mut rng1 = ChaCha8Rng::seed_from_u64(7);
        let mut rng2 = ChaCha8Rng::seed_from_u64(7);
        let a = mc_oracle(&p, 50_000, &mut rng1);
        let b = mc_oracle_sequential(&p, 50_000, &mut rng2);
        assert_eq!(a, b);
    }

    #[test]
    fn mc_oracle_stays_within_four_standard_errors_in_99_percent_of_trials() {
        let p = params(20, 0.5, 16, 20, 16, 8, 0, 0);
        let q = collision_probability(&p);
        let trials = 200;
        let mut out_of_band = 0;
        for seed in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let est = mc_oracle(&p, 10_000, &mut rng);
            if (est.estimate - q).abs() > 4.0 * est.std_err {
                out_of_band += 1;
            }
        }
        assert!(out_of_band <= trials / 100, "{out_of_band} of {trials} trials out of band");
    }

    #[test]
    fn mc_oracle_converges_at_root_n_rate() {
        let p = params(20, 0.5, 16, 20, 16, 8, 0, 0);
        let q = collision_probability(&p);
        for n in [1_000u64, 10_000, 100_000] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let est = mc_oracle(&p, n, &mut rng);
            let bound = 5.0 * (q * (1.0 - q) / n as f64).sqrt();
            assert!((est.estimate - q).abs() <= bound, "n={n}: {est:?} vs {q}");
        }
    }

    #[test]
    fn marginal_composition_stays_in_unit_interval_and_grows_with_alpha() {
        let q_at = |alpha: f64| {
            marginal_collision_probability(&params(40, alpha, 16, 20, 16, 0, 0, 0)).unwrap()
        };
        let (q0, q1, q2) = (q_at(0.0), q_at(0.3), q_at(0.9));
        assert_eq!(q0, 0.0);
        assert!(q0 <= q1 && q1 <= q2);
        assert!((0.0..=1.0).contains(&q2));

        // Undefined once the surrounding count exceeds the pattern count.
        let p = params(500, 0.3, 16, 20, 16, 0, 0, 0);
        assert!(matches!(
            marginal_collision_probability(&p),
            Err(AnalysisError::Domain(_))
        ));
    }

    #[test]
    fn all_probability_outputs_stay_in_unit_interval() {
        for p_count in [0usize, 3, 17, 60] {
            for alpha in [0.0, 0.2, 0.7, 1.0] {
                for x in [0usize, 1, p_count.min(9), p_count] {
                    if x > p_count {
                        continue;
                    }
                    for y in [0usize, x / 2, x] {
                        let p = params(p_count, alpha, 16, 20, 16, x, y, x.min(20));
                        let px = pr_interferer_count(&p);
                        assert!((0.0..=1.0).contains(&px), "{p:?} -> {px}");
                        let q = collision_probability(&p);
                        assert!((0.0..=1.0).contains(&q));
                        let pt = pr_two_stage_colliders(&p, q);
                        assert!((0.0..=1.0).contains(&pt));
                        if let Ok(py) = pr_orthogonal_given_interferers(&p) {
                            assert!((0.0..=1.0).contains(&py));
                        }
                    }
                }
            }
        }
    }
}
