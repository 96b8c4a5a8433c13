//! Paired comparison battery for EXP-vs-FTD CAGR samples.
//!
//! Every p-value is one-sided with the alternative "EXP outperforms FTD",
//! i.e. the paired differences `exp - ftd` are shifted above zero.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod battery;
pub mod bootstrap;
pub mod dist;
pub mod dominance;
pub mod effect;
pub mod ttest;
pub mod wilcoxon;

pub use battery::{run_battery, BatteryConfig, Cell, ComparisonReport};
pub use bootstrap::{bootstrap_bca, BootstrapCi};
pub use dominance::{check_fsd, check_ssd, ecdf, ks_two_sample, Dominance, DominanceVerdict, Ecdf};
pub use effect::{classify_effect, cohens_d, hedges_g, EffectLabel, EffectSize, HedgesVariant};
pub use ttest::paired_t_one_tailed;
pub use wilcoxon::{wilcoxon_signed_rank, WilcoxonMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("insufficient data: n = {n}, need at least {required}")]
    InsufficientData { n: usize, required: usize },
    #[error("paired vectors differ in length ({exp} vs {ftd})")]
    LengthMismatch { exp: usize, ftd: usize },
    #[error("sample contains a non-finite value")]
    NonFinite,
    #[error("degenerate sample: {0}")]
    Degenerate(&'static str),
    #[error("empty input")]
    Empty,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    NormalApprox,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub df: Option<f64>,
    pub method: Method,
}

/// Aligned per-window outcomes of both strategies. Differences are derived
/// on construction and cannot drift from the inputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedSample {
    exp_values: Vec<f64>,
    ftd_values: Vec<f64>,
    diffs: Vec<f64>,
}

impl PairedSample {
    pub fn new(exp_values: Vec<f64>, ftd_values: Vec<f64>) -> Result<Self, StatsError> {
        if exp_values.len() != ftd_values.len() {
            return Err(StatsError::LengthMismatch {
                exp: exp_values.len(),
                ftd: ftd_values.len(),
            });
        }
        if exp_values.is_empty() {
            return Err(StatsError::Empty);
        }
        if exp_values.iter().chain(&ftd_values).any(|x| !x.is_finite()) {
            return Err(StatsError::NonFinite);
        }
        let diffs = exp_values.iter().zip(&ftd_values).map(|(e, f)| e - f).collect();
        Ok(Self {
            exp_values,
            ftd_values,
            diffs,
        })
    }

    /// A sample known only through its differences (e.g. a transcribed table
    /// column). The FTD side is taken as zero.
    pub fn from_diffs(diffs: Vec<f64>) -> Result<Self, StatsError> {
        let zeros = alloc::vec![0.0; diffs.len()];
        Self::new(diffs, zeros)
    }

    pub fn exp_values(&self) -> &[f64] {
        &self.exp_values
    }

    pub fn ftd_values(&self) -> &[f64] {
        &self.ftd_values
    }

    pub fn diffs(&self) -> &[f64] {
        &self.diffs
    }

    pub fn n(&self) -> usize {
        self.diffs.len()
    }

    fn require(&self, required: usize) -> Result<(), StatsError> {
        if self.n() < required {
            Err(StatsError::InsufficientData { n: self.n(), required })
        } else {
            Ok(())
        }
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n - 1 denominator).
pub fn sample_sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    libm::sqrt(ss / (xs.len() as f64 - 1.0))
}

pub(crate) fn all_equal(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] == w[1])
}

pub(crate) fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}
