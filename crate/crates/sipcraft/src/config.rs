//! Run configuration, loadable from JSON. Command-line flags override file
//! values; the seed falls back to `SIPCRAFT_SEED` when neither sets it.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sipcraft_core::sip::DURATIONS;
use sipcraft_core::stats::battery::BatteryConfig;
use sipcraft_core::stats::bootstrap::MIN_RESAMPLES;

use crate::error::{Error, Result};
use crate::report::Format;

pub const SEED_ENV: &str = "SIPCRAFT_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub data: Option<PathBuf>,
    pub schedule: Option<PathBuf>,
    pub durations: Vec<u32>,
    pub amount: f64,
    pub stats: BatteryConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data: None,
            schedule: None,
            durations: vec![1, 3, 5],
            amount: 1000.0,
            stats: BatteryConfig::default(),
            format: Format::Markdown,
            out: None,
        }
    }
}

/// File contents as read, so that a file which leaves the seed out can still
/// defer to the environment.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawConfig {
    data: Option<PathBuf>,
    schedule: Option<PathBuf>,
    durations: Option<Vec<u32>>,
    amount: Option<f64>,
    stats: Option<RawStats>,
    format: Option<Format>,
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawStats {
    #[serde(rename = "B", alias = "resamples")]
    resamples: Option<usize>,
    alpha: Option<f64>,
    seed: Option<u64>,
    wilcoxon_mode: Option<sipcraft_core::stats::WilcoxonMode>,
    hedges_variant: Option<sipcraft_core::stats::HedgesVariant>,
}

/// Values given on the command line; `None` leaves the file or default.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub data: Option<PathBuf>,
    pub schedule: Option<PathBuf>,
    pub durations: Option<Vec<u32>>,
    pub amount: Option<f64>,
    pub seed: Option<u64>,
    pub resamples: Option<usize>,
    pub alpha: Option<f64>,
    pub wilcoxon_mode: Option<sipcraft_core::stats::WilcoxonMode>,
    pub hedges_variant: Option<sipcraft_core::stats::HedgesVariant>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Precedence: flag, then file, then `env_seed` (seed only), then default.
    pub fn resolve(file: Option<&Path>, flags: Overrides, env_seed: Option<&str>) -> Result<Self> {
        let raw: RawConfig = match file {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| Error::Io {
                    path: p.to_path_buf(),
                    source,
                })?;
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
            }
            None => RawConfig::default(),
        };
        let stats = raw.stats.unwrap_or_default();
        let env_seed = match env_seed {
            Some(s) => Some(
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Config(format!("{SEED_ENV}={s:?} is not an unsigned integer")))?,
            ),
            None => None,
        };
        let d = RunConfig::default();
        let cfg = RunConfig {
            data: flags.data.or(raw.data),
            schedule: flags.schedule.or(raw.schedule),
            durations: flags.durations.or(raw.durations).unwrap_or(d.durations),
            amount: flags.amount.or(raw.amount).unwrap_or(d.amount),
            stats: BatteryConfig {
                resamples: flags.resamples.or(stats.resamples).unwrap_or(d.stats.resamples),
                alpha: flags.alpha.or(stats.alpha).unwrap_or(d.stats.alpha),
                seed: flags.seed.or(stats.seed).or(env_seed).unwrap_or(d.stats.seed),
                wilcoxon_mode: flags.wilcoxon_mode.or(stats.wilcoxon_mode).unwrap_or(d.stats.wilcoxon_mode),
                hedges_variant: flags.hedges_variant.or(stats.hedges_variant).unwrap_or(d.stats.hedges_variant),
            },
            format: flags.format.or(raw.format).unwrap_or(d.format),
            out: flags.out.or(raw.out),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.durations.is_empty() {
            return Err(Error::Config("no durations requested".into()));
        }
        for d in &self.durations {
            if !DURATIONS.contains(d) {
                return Err(Error::Config(format!("unsupported duration {d} (allowed: 1, 3, 5, 10, 20)")));
            }
        }
        if !(self.amount.is_finite() && self.amount > 0.0) {
            return Err(Error::Config(format!("monthly amount must be positive, got {}", self.amount)));
        }
        if self.stats.resamples < MIN_RESAMPLES {
            return Err(Error::Config(format!(
                "bootstrap resamples must be at least {MIN_RESAMPLES}, got {}",
                self.stats.resamples
            )));
        }
        if !(self.stats.alpha > 0.0 && self.stats.alpha < 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1), got {}", self.stats.alpha)));
        }
        Ok(())
    }

    /// Durations sorted and deduplicated.
    pub fn durations_sorted(&self) -> Vec<u32> {
        let mut v = self.durations.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}
