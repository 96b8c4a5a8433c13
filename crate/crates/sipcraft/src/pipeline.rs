//! Loading inputs and running the comparison end to end.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use sipcraft_core::calendar::{build_schedule, MonthKey, MonthRange, ScheduleBuild};
use sipcraft_core::sip::{assemble_paired_run, enumerate_windows, run_window, PairedRun};
use sipcraft_core::stats::battery::ComparisonReport;
use sipcraft_core::summary::boxplot_summary;
use sipcraft_core::{IndexSeries, ScheduleTable, SipError};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::formats::{load_schedule_overrides, parse_series};
use crate::parallel::par_run_battery;
use crate::report::{BoxplotEntry, WindowRow};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileInfo {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

fn read_file(path: &Path) -> Result<(String, FileInfo)> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let info = FileInfo {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
        bytes: bytes.len() as u64,
    };
    let text = String::from_utf8(bytes).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, e),
    })?;
    Ok((text, info))
}

pub fn load_series(path: &Path) -> Result<(IndexSeries, FileInfo)> {
    let (text, info) = read_file(path)?;
    let series = parse_series(&text).map_err(|source| Error::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((series, info))
}

pub fn load_overrides(path: &Path) -> Result<(ScheduleTable, FileInfo)> {
    let (text, info) = read_file(path)?;
    let table = load_schedule_overrides(&text).map_err(|source| Error::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((table, info))
}

/// Months whose anchors the given durations need: the December before the
/// earliest window through the December of the latest.
pub fn required_range(durations: &[u32]) -> Result<MonthRange> {
    let mut first = i32::MAX;
    let mut last = i32::MIN;
    for &d in durations {
        for w in enumerate_windows(d)? {
            first = first.min(w.from_year);
            last = last.max(w.to_year);
        }
    }
    if first > last {
        return Err(Error::Config("no windows for the requested durations".into()));
    }
    let start = MonthKey::new(first - 1, 12).expect("valid month");
    let end = MonthKey::new(last, 12).expect("valid month");
    Ok(MonthRange::new(start, end))
}

pub fn prepare_schedule(series: &IndexSeries, overrides: Option<&ScheduleTable>, durations: &[u32]) -> Result<ScheduleBuild> {
    Ok(build_schedule(series, overrides, required_range(durations)?))
}

/// All windows of one duration, evaluated in parallel and returned in
/// start-year order.
pub fn run_duration(duration: u32, series: &IndexSeries, table: &ScheduleTable, amount: f64) -> Result<PairedRun> {
    let outcomes = enumerate_windows(duration)?
        .into_par_iter()
        .map(|w| run_window(w, series, table, amount))
        .collect::<Result<Vec<_>, SipError>>()?;
    Ok(assemble_paired_run(duration, outcomes)?)
}

pub fn horizon_label(duration: u32) -> String {
    format!("{duration}-Year")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonOutput {
    pub duration: u32,
    pub horizon: String,
    pub rows: Vec<WindowRow>,
    pub report: ComparisonReport,
    pub boxplots: Vec<BoxplotEntry>,
}

pub fn compare(config: &RunConfig, series: &IndexSeries, table: &ScheduleTable) -> Result<Vec<HorizonOutput>> {
    config
        .durations_sorted()
        .into_iter()
        .map(|d| {
            let run = run_duration(d, series, table, config.amount)?;
            let horizon = horizon_label(d);
            let report = par_run_battery(&run.sample, &config.stats, &horizon);
            let mut boxplots = Vec::new();
            for (strategy, values) in [("FTD", run.sample.ftd_values()), ("EXP", run.sample.exp_values())] {
                boxplots.push(BoxplotEntry {
                    horizon: horizon.clone(),
                    strategy: strategy.into(),
                    summary: boxplot_summary(values)?,
                });
            }
            Ok(HorizonOutput {
                duration: d,
                horizon,
                rows: run.outcomes.iter().map(WindowRow::from_outcome).collect(),
                report,
                boxplots,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r = required_range(&[1]).unwrap();
        assert_eq!((r.start.to_string(), r.end.to_string()), ("2002-12".into(), "2024-12".into()));
        let r = required_range(&[10, 20]).unwrap();
        assert_eq!(r.start.to_string(), "2004-12");
    }
}
