//! The complete output of a `compare` run.

use std::fmt::Write as _;

use serde::Serialize;
use sipcraft_core::stats::battery::ComparisonReport;
use sipcraft_core::IndexSeries;

use crate::config::RunConfig;
use crate::pipeline::{FileInfo, HorizonOutput};
use crate::report::{render_boxplots, render_metrics_table, render_window_table, BoxplotEntry, Format, IssueRecord};

pub const QUANTILE_CONVENTION: &str = "type 7 (linear interpolation between order statistics)";
pub const DIFFERENCE_RULE: &str = "difference = round2(CAGR(E) - CAGR(F)) computed at full precision";

#[derive(Debug, Clone, Serialize)]
pub struct DataSpan {
    pub first: String,
    pub last: String,
    pub trading_days: usize,
}

impl DataSpan {
    pub fn of(series: &IndexSeries) -> Self {
        Self {
            first: series.first_date().to_string(),
            last: series.last_date().to_string(),
            trading_days: series.len(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScheduleInfo {
    /// `"overrides"` or `"computed"`.
    pub source: String,
    pub file: Option<FileInfo>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub data: FileInfo,
    pub data_span: DataSpan,
    pub schedule: ScheduleInfo,
    pub config: RunConfig,
    pub quantile_convention: String,
    pub difference_rule: String,
}

impl Provenance {
    pub fn new(data: FileInfo, series: &IndexSeries, schedule: ScheduleInfo, config: RunConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            data,
            data_span: DataSpan::of(series),
            schedule,
            config,
            quantile_convention: QUANTILE_CONVENTION.into(),
            difference_rule: DIFFERENCE_RULE.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct HorizonJson<'a> {
    duration: u32,
    horizon: &'a str,
    windows: serde_json::Value,
    report: &'a ComparisonReport,
    boxplots: &'a [BoxplotEntry],
}

#[derive(Debug, Clone, Serialize)]
pub struct Bundle {
    pub provenance: Provenance,
    pub schedule_issues: Vec<IssueRecord>,
    pub horizons: Vec<HorizonOutput>,
}

impl Bundle {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.render_json(),
            Format::Markdown => self.render_markdown(),
            Format::Csv => self.render_csv(),
        }
    }

    fn reports(&self) -> Vec<ComparisonReport> {
        self.horizons.iter().map(|h| h.report.clone()).collect()
    }

    fn boxplots(&self) -> Vec<BoxplotEntry> {
        self.horizons.iter().flat_map(|h| h.boxplots.iter().cloned()).collect()
    }

    fn render_json(&self) -> String {
        let horizons: Vec<HorizonJson> = self
            .horizons
            .iter()
            .map(|h| HorizonJson {
                duration: h.duration,
                horizon: &h.horizon,
                windows: serde_json::from_str(&render_window_table(&h.rows, Format::Json))
                    .expect("window table is valid JSON"),
                report: &h.report,
                boxplots: &h.boxplots,
            })
            .collect();
        let value = serde_json::json!({
            "provenance": self.provenance,
            "schedule_issues": self.schedule_issues,
            "horizons": horizons,
        });
        let mut s = serde_json::to_string_pretty(&value).expect("plain data serializes");
        s.push('\n');
        s
    }

    fn render_markdown(&self) -> String {
        let p = &self.provenance;
        let mut out = String::from("# SIP timing comparison: first trading day vs expiry day\n\n");
        let _ = writeln!(out, "- tool: {} {}", p.tool, p.version);
        let _ = writeln!(
            out,
            "- data: {} (sha256 {}, {} trading days, {} to {})",
            p.data.path, p.data.sha256, p.data_span.trading_days, p.data_span.first, p.data_span.last
        );
        match &p.schedule.file {
            Some(f) => {
                let _ = writeln!(out, "- schedule: {} from {} (sha256 {})", p.schedule.source, f.path, f.sha256);
            }
            None => {
                let _ = writeln!(out, "- schedule: {}", p.schedule.source);
            }
        }
        let _ = writeln!(
            out,
            "- monthly amount: {}; bootstrap B = {}, seed = {}, alpha = {}",
            p.config.amount, p.config.stats.resamples, p.config.stats.seed, p.config.stats.alpha
        );
        let _ = writeln!(out, "- schedule issues: {}", self.schedule_issues.len());
        for i in &self.schedule_issues {
            let _ = writeln!(
                out,
                "  - {} {} {}: {}",
                i.month,
                i.field,
                i.date.as_deref().unwrap_or("-"),
                i.detail
            );
        }
        for h in &self.horizons {
            let _ = write!(out, "\n## {} windows\n\n", h.horizon);
            out.push_str(&render_window_table(&h.rows, Format::Markdown));
        }
        out.push_str("\n## Statistical comparison\n\n");
        out.push_str(&render_metrics_table(&self.reports(), Format::Markdown));
        out.push_str("\n## CAGR distributions\n\n");
        out.push_str(&render_boxplots(&self.boxplots(), Format::Markdown));
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        for h in &self.horizons {
            let _ = writeln!(out, "# windows {}", h.horizon);
            out.push_str(&render_window_table(&h.rows, Format::Csv));
            out.push('\n');
        }
        out.push_str("# metrics\n");
        out.push_str(&render_metrics_table(&self.reports(), Format::Csv));
        out.push_str("\n# boxplots\n");
        out.push_str(&render_boxplots(&self.boxplots(), Format::Csv));
        out
    }
}
