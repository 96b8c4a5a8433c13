//! Rayon-backed replicate generation. Replicate `r` depends only on
//! `(seed, r)`, so the output equals the serial core routine bit for bit.

use rayon::prelude::*;
use sipcraft_core::stats::battery::{run_battery_with, BatteryConfig, ComparisonReport};
use sipcraft_core::stats::bootstrap::{bca_from_replicates, resample_mean, BootstrapCi};
use sipcraft_core::{PairedSample, StatsError};

pub fn par_bootstrap_replicates(diffs: &[f64], resamples: usize, seed: u64) -> Vec<f64> {
    (0..resamples as u64)
        .into_par_iter()
        .map(|r| resample_mean(diffs, seed, r))
        .collect()
}

pub fn par_bootstrap_bca(s: &PairedSample, resamples: usize, alpha: f64, seed: u64) -> Result<BootstrapCi, StatsError> {
    let reps = par_bootstrap_replicates(s.diffs(), resamples, seed);
    bca_from_replicates(s, &reps, alpha, seed)
}

pub fn par_run_battery(s: &PairedSample, config: &BatteryConfig, horizon: &str) -> ComparisonReport {
    run_battery_with(s, config, horizon, par_bootstrap_replicates)
}
