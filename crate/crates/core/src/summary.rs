//! Quantiles and boxplot statistics.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::stats::{sorted, StatsError};

/// Linear interpolation between order statistics (Hyndman-Fan type 7):
/// `h = (n - 1) p`, `Q = x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h])`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = libm::floor(h) as usize;
    if lo + 1 >= n {
        return sorted[n - 1];
    }
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotSummary {
    pub n: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    /// Most extreme observations within `1.5 * IQR` of the box.
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
}

pub fn boxplot_summary(sample: &[f64]) -> Result<BoxplotSummary, StatsError> {
    if sample.is_empty() {
        return Err(StatsError::Empty);
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let v = sorted(sample);
    let q1 = quantile_sorted(&v, 0.25);
    let median = quantile_sorted(&v, 0.5);
    let q3 = quantile_sorted(&v, 0.75);
    let iqr = q3 - q1;
    let (fence_lo, fence_hi) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let inside = || v.iter().copied().filter(|&x| x >= fence_lo && x <= fence_hi);
    Ok(BoxplotSummary {
        n: v.len(),
        min: v[0],
        q1,
        median,
        q3,
        max: v[v.len() - 1],
        whisker_low: inside().next().unwrap_or(q1),
        whisker_high: inside().next_back().unwrap_or(q3),
        outliers: v.iter().copied().filter(|&x| x < fence_lo || x > fence_hi).collect(),
    })
}
