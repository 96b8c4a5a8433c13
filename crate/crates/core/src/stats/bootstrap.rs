//! BCa bootstrap interval for the mean paired difference.
//!
//! Replicate `r` draws its indices from a ChaCha8 stream selected by `r`
//! under the run seed, so replicates can be computed in any order (or in
//! parallel) and still be bit-identical to a serial run.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dist::{normal_cdf, normal_quantile};
use super::{all_equal, mean, sorted, PairedSample, StatsError};
use crate::summary::quantile_sorted;

pub const MIN_RESAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapCi {
    pub point_estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub resamples: usize,
    pub seed: u64,
    pub alpha: f64,
    pub z0: f64,
    pub acceleration: f64,
    /// All differences identical; the interval collapses to the point.
    pub degenerate: bool,
}

/// Mean of the `r`-th resample of `diffs`.
pub fn resample_mean(diffs: &[f64], seed: u64, r: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r);
    let n = diffs.len();
    let mut sum = 0.0;
    for _ in 0..n {
        sum += diffs[rng.random_range(0..n)];
    }
    sum / n as f64
}

pub fn bootstrap_replicates(diffs: &[f64], resamples: usize, seed: u64) -> Vec<f64> {
    (0..resamples as u64).map(|r| resample_mean(diffs, seed, r)).collect()
}

/// `Phi^-1` of the share of replicates strictly below the observed value,
/// with the share clamped to `[1/(2B), 1 - 1/(2B)]`.
pub fn bias_correction(replicates: &[f64], observed: f64) -> f64 {
    let b = replicates.len() as f64;
    let below = replicates.iter().filter(|&&x| x < observed).count() as f64;
    let share = (below / b).clamp(0.5 / b, 1.0 - 0.5 / b);
    normal_quantile(share)
}

/// Acceleration from the skewness of leave-one-out means.
pub fn jackknife_acceleration(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let total: f64 = xs.iter().sum();
    let loo: Vec<f64> = xs.iter().map(|x| (total - x) / (n - 1.0)).collect();
    let center = mean(&loo);
    let (mut num, mut den) = (0.0, 0.0);
    for v in &loo {
        let dv = center - v;
        num += dv * dv * dv;
        den += dv * dv;
    }
    if den == 0.0 {
        return 0.0;
    }
    num / (6.0 * libm::pow(den, 1.5))
}

/// BCa-adjusted tail level for nominal level `level`.
pub fn adjusted_level(level: f64, z0: f64, acceleration: f64) -> f64 {
    if z0 == 0.0 && acceleration == 0.0 {
        return level;
    }
    let z = z0 + normal_quantile(level);
    normal_cdf(z0 + z / (1.0 - acceleration * z))
}

/// Percentile interval over sorted replicates.
pub fn percentile_interval(sorted_replicates: &[f64], alpha: f64) -> (f64, f64) {
    (
        quantile_sorted(sorted_replicates, alpha / 2.0),
        quantile_sorted(sorted_replicates, 1.0 - alpha / 2.0),
    )
}

/// BCa interval over sorted replicates for given bias correction and
/// acceleration.
pub fn bca_interval(sorted_replicates: &[f64], z0: f64, acceleration: f64, alpha: f64) -> (f64, f64) {
    let lo = adjusted_level(alpha / 2.0, z0, acceleration);
    let hi = adjusted_level(1.0 - alpha / 2.0, z0, acceleration);
    (quantile_sorted(sorted_replicates, lo), quantile_sorted(sorted_replicates, hi))
}

fn check_params(s: &PairedSample, resamples: usize, alpha: f64) -> Result<(), StatsError> {
    s.require(3)?;
    if resamples < MIN_RESAMPLES {
        return Err(StatsError::InvalidParameter("at least 1000 resamples required"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatsError::InvalidParameter("alpha must lie in (0, 1)"));
    }
    Ok(())
}

fn degenerate(s: &PairedSample, resamples: usize, alpha: f64, seed: u64) -> BootstrapCi {
    let c = s.diffs()[0];
    BootstrapCi {
        point_estimate: c,
        lower: c,
        upper: c,
        resamples,
        seed,
        alpha,
        z0: 0.0,
        acceleration: 0.0,
        degenerate: true,
    }
}

/// Assembles the interval from precomputed replicates (any order).
pub fn bca_from_replicates(
    s: &PairedSample,
    replicates: &[f64],
    alpha: f64,
    seed: u64,
) -> Result<BootstrapCi, StatsError> {
    check_params(s, replicates.len(), alpha)?;
    if all_equal(s.diffs()) {
        return Ok(degenerate(s, replicates.len(), alpha, seed));
    }
    let observed = mean(s.diffs());
    let z0 = bias_correction(replicates, observed);
    let acceleration = jackknife_acceleration(s.diffs());
    let (lower, upper) = bca_interval(&sorted(replicates), z0, acceleration, alpha);
    Ok(BootstrapCi {
        point_estimate: observed,
        lower,
        upper,
        resamples: replicates.len(),
        seed,
        alpha,
        z0,
        acceleration,
        degenerate: false,
    })
}

pub fn bootstrap_bca(s: &PairedSample, resamples: usize, alpha: f64, seed: u64) -> Result<BootstrapCi, StatsError> {
    check_params(s, resamples, alpha)?;
    if all_equal(s.diffs()) {
        return Ok(degenerate(s, resamples, alpha, seed));
    }
    let reps = bootstrap_replicates(s.diffs(), resamples, seed);
    bca_from_replicates(s, &reps, alpha, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn constant_sample_collapses() {
        let s = PairedSample::from_diffs(vec![0.4; 5]).unwrap();
        let ci = bootstrap_bca(&s, 2000, 0.05, 1).unwrap();
        assert!(ci.degenerate);
        assert_eq!((ci.lower, ci.point_estimate, ci.upper), (0.4, 0.4, 0.4));
    }

    #[test]
    fn parameter_checks() {
        let s = PairedSample::from_diffs(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(bootstrap_bca(&s, 999, 0.05, 1).is_err());
        assert!(bootstrap_bca(&s, 1000, 0.0, 1).is_err());
        assert!(bootstrap_bca(&s, 1000, 1.0, 1).is_err());
        let s = PairedSample::from_diffs(vec![1.0, 2.0]).unwrap();
        assert!(bootstrap_bca(&s, 1000, 0.05, 1).is_err());
    }

    #[test]
    fn same_seed_same_interval() {
        let s = PairedSample::from_diffs(vec![0.49, 0.04, 0.17, 0.63, 0.27, -0.09, 0.38]).unwrap();
        let a = bootstrap_bca(&s, 3000, 0.05, 7).unwrap();
        let b = bootstrap_bca(&s, 3000, 0.05, 7).unwrap();
        assert_eq!(a, b);
        let c = bootstrap_bca(&s, 3000, 0.05, 8).unwrap();
        assert_ne!(a.lower, c.lower);
        assert!(a.lower < a.point_estimate && a.point_estimate < a.upper);
    }

    #[test]
    fn symmetric_sample_has_zero_acceleration() {
        let a = jackknife_acceleration(&[-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert!(a.abs() < 1e-15);
        // right-skewed sample: leave-one-out means are left-skewed, a > 0
        assert!(jackknife_acceleration(&[0.0, 0.0, 0.0, 0.0, 10.0]) > 0.0);
    }

    #[test]
    fn identity_adjustment() {
        assert_eq!(adjusted_level(0.025, 0.0, 0.0), 0.025);
        let reps: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(bca_interval(&reps, 0.0, 0.0, 0.05), percentile_interval(&reps, 0.05));
        // positive z0 shifts both bounds up
        let (lo, hi) = bca_interval(&reps, 0.2, 0.0, 0.05);
        let (plo, phi) = percentile_interval(&reps, 0.05);
        assert!(lo > plo && hi > phi);
    }
}
