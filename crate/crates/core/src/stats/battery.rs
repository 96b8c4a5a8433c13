//! One column of the comparison table: every test run over one horizon's
//! paired sample. Tests that cannot run on the input are recorded as
//! not applicable, with the reason, instead of aborting the battery.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::bootstrap::{bca_from_replicates, bootstrap_replicates, BootstrapCi};
use super::dominance::{check_fsd, check_ssd, ks_two_sample, Dominance};
use super::effect::{classify_effect, cohens_d, hedges_g, EffectLabel, HedgesVariant};
use super::ttest::paired_t_one_tailed;
use super::wilcoxon::{wilcoxon_signed_rank, WilcoxonMode};
use super::{PairedSample, StatsError, TestResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BatteryConfig {
    #[serde(rename = "B", alias = "resamples")]
    pub resamples: usize,
    pub alpha: f64,
    pub seed: u64,
    pub wilcoxon_mode: WilcoxonMode,
    pub hedges_variant: HedgesVariant,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            resamples: 10_000,
            alpha: 0.05,
            seed: 42,
            wilcoxon_mode: WilcoxonMode::Auto,
            hedges_variant: HedgesVariant::Standard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell<T> {
    Value(T),
    NotApplicable(String),
}

impl<T> Cell<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Cell::Value(v) => Some(v),
            Cell::NotApplicable(_) => None,
        }
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Cell::Value(_))
    }

    fn na(reason: &str) -> Self {
        Cell::NotApplicable(String::from(reason))
    }
}

impl<T> From<Result<T, StatsError>> for Cell<T> {
    fn from(r: Result<T, StatsError>) -> Self {
        match r {
            Ok(v) => Cell::Value(v),
            Err(e) => Cell::NotApplicable(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub horizon: String,
    pub n: usize,
    pub t_test: Cell<TestResult>,
    pub wilcoxon: Cell<TestResult>,
    pub cohens_d: Cell<f64>,
    pub d_label: Cell<EffectLabel>,
    pub hedges_g: Cell<f64>,
    pub hedges_variant: HedgesVariant,
    pub bootstrap: Cell<BootstrapCi>,
    pub ks: Cell<KsResult>,
    pub fsd: Cell<Dominance>,
    pub ssd: Cell<Dominance>,
    pub notes: Vec<String>,
}

impl ComparisonReport {
    fn all_na(horizon: &str, n: usize, config: &BatteryConfig, reason: &str) -> Self {
        Self {
            horizon: horizon.into(),
            n,
            t_test: Cell::na(reason),
            wilcoxon: Cell::na(reason),
            cohens_d: Cell::na(reason),
            d_label: Cell::na(reason),
            hedges_g: Cell::na(reason),
            hedges_variant: config.hedges_variant,
            bootstrap: Cell::na(reason),
            ks: Cell::na(reason),
            fsd: Cell::na(reason),
            ssd: Cell::na(reason),
            notes: alloc::vec![String::from(reason)],
        }
    }
}

pub fn run_battery(s: &PairedSample, config: &BatteryConfig, horizon: &str) -> ComparisonReport {
    run_battery_with(s, config, horizon, bootstrap_replicates)
}

/// As [`run_battery`], with a caller-supplied replicate generator. The
/// generator must return replicate `r` at index `r`.
pub fn run_battery_with<F>(s: &PairedSample, config: &BatteryConfig, horizon: &str, replicates: F) -> ComparisonReport
where
    F: Fn(&[f64], usize, u64) -> Vec<f64>,
{
    let n = s.n();
    if n < 2 {
        return ComparisonReport::all_na(horizon, n, config, &format!("n too small (n = {n})"));
    }
    if s.diffs().iter().all(|&d| d == 0.0) {
        return ComparisonReport::all_na(horizon, n, config, "degenerate: all paired differences are zero");
    }

    let d = cohens_d(s);
    let hedges = d.clone().and_then(|d| hedges_g(d, n, config.hedges_variant));
    let bootstrap = if n < 3 {
        Err(StatsError::InsufficientData { n, required: 3 })
    } else {
        let reps = replicates(s.diffs(), config.resamples, config.seed);
        bca_from_replicates(s, &reps, config.alpha, config.seed)
    };
    let mut notes = Vec::new();
    let bootstrap: Cell<BootstrapCi> = match bootstrap {
        Ok(ci) if ci.degenerate => Cell::na("degenerate: all paired differences are identical"),
        other => other.into(),
    };
    let wilcoxon: Cell<TestResult> = wilcoxon_signed_rank(s, config.wilcoxon_mode).into();
    if let Cell::Value(w) = &wilcoxon {
        notes.push(format!("wilcoxon method: {:?}", w.method));
    }

    ComparisonReport {
        horizon: horizon.into(),
        n,
        t_test: paired_t_one_tailed(s).into(),
        wilcoxon,
        cohens_d: d.clone().into(),
        d_label: d.map(classify_effect).into(),
        hedges_g: hedges.into(),
        hedges_variant: config.hedges_variant,
        bootstrap,
        ks: ks_two_sample(s.exp_values(), s.ftd_values())
            .map(|(statistic, p_value)| KsResult { statistic, p_value })
            .into(),
        fsd: check_fsd(s).into(),
        ssd: check_ssd(s).into(),
        notes,
    }
}
