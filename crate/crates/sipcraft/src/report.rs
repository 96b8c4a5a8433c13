//! Table- and JSON-shaped outputs.
//!
//! Window tables list both strategies' CAGRs per window at two decimals.
//! Their difference column is the rounded full-precision difference; when
//! that disagrees with the difference of the two rounded columns, the latter
//! is emitted alongside it.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sipcraft_core::stats::battery::{Cell, ComparisonReport};
use sipcraft_core::stats::{Dominance, HedgesVariant, Method};
use sipcraft_core::summary::BoxplotSummary;
use sipcraft_core::{ValidationIssue, WindowOutcome};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Markdown,
    Csv,
    Json,
}

pub fn round2(x: f64) -> f64 {
    let r = (x * 100.0).round() / 100.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn fixed2(x: f64) -> String {
    format!("{:.2}", round2(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowRow {
    pub from_year: i32,
    pub to_year: i32,
    pub years: u32,
    pub cagr_f: f64,
    pub cagr_e: f64,
    pub difference: f64,
}

impl WindowRow {
    pub fn from_outcome(o: &WindowOutcome) -> Self {
        Self {
            from_year: o.window.from_year,
            to_year: o.window.to_year,
            years: o.window.years(),
            cagr_f: round2(o.cagr_f()),
            cagr_e: round2(o.cagr_e()),
            difference: round2(o.difference()),
        }
    }

    /// `cagr_e - cagr_f` of the rounded columns, when it differs from
    /// `difference`.
    pub fn difference_of_rounded(&self) -> Option<f64> {
        let d = round2(self.cagr_e - self.cagr_f);
        (d != self.difference).then_some(d)
    }
}

const DIFFERENCE_NOTE: &str =
    "Difference = round(CAGR(E) - CAGR(F)) at full precision; difference_of_rounded is shown where subtracting the rounded columns gives another value.";

#[derive(Serialize, Deserialize)]
struct WindowRowJson {
    from_year: i32,
    to_year: i32,
    years: u32,
    cagr_f: f64,
    cagr_e: f64,
    difference: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    difference_of_rounded: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct WindowTableJson {
    rows: Vec<WindowRowJson>,
    note: String,
}

pub fn render_window_table(rows: &[WindowRow], format: Format) -> String {
    match format {
        Format::Markdown => {
            let mut out = String::from(
                "| From | To | Years | CAGR (F) | CAGR (E) | Difference |\n|---:|---:|---:|---:|---:|---:|\n",
            );
            for r in rows {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} |",
                    r.from_year,
                    r.to_year,
                    r.years,
                    fixed2(r.cagr_f),
                    fixed2(r.cagr_e),
                    fixed2(r.difference)
                );
            }
            let odd: Vec<String> = rows
                .iter()
                .filter_map(|r| {
                    r.difference_of_rounded()
                        .map(|d| format!("{}-{}: {}", r.from_year, r.to_year, fixed2(d)))
                })
                .collect();
            out.push_str("\nDifference = CAGR(E) - CAGR(F) at full precision, then rounded.\n");
            if !odd.is_empty() {
                let _ = writeln!(out, "Difference of rounded columns: {}.", odd.join("; "));
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("from,to,years,cagr_f,cagr_e,difference,difference_of_rounded\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.from_year,
                    r.to_year,
                    r.years,
                    fixed2(r.cagr_f),
                    fixed2(r.cagr_e),
                    fixed2(r.difference),
                    r.difference_of_rounded().map(fixed2).unwrap_or_default()
                );
            }
            out
        }
        Format::Json => {
            let table = WindowTableJson {
                rows: rows
                    .iter()
                    .map(|r| WindowRowJson {
                        from_year: r.from_year,
                        to_year: r.to_year,
                        years: r.years,
                        cagr_f: r.cagr_f,
                        cagr_e: r.cagr_e,
                        difference: r.difference,
                        difference_of_rounded: r.difference_of_rounded(),
                    })
                    .collect(),
                note: DIFFERENCE_NOTE.into(),
            };
            let mut s = serde_json::to_string_pretty(&table).expect("plain data serializes");
            s.push('\n');
            s
        }
    }
}

/// Reads back a CSV or JSON window table.
pub fn parse_window_table(text: &str, format: Format) -> Result<Vec<WindowRow>> {
    match format {
        Format::Json => {
            let t: WindowTableJson = serde_json::from_str(text)?;
            Ok(t.rows
                .into_iter()
                .map(|r| WindowRow {
                    from_year: r.from_year,
                    to_year: r.to_year,
                    years: r.years,
                    cagr_f: r.cagr_f,
                    cagr_e: r.cagr_e,
                    difference: r.difference,
                })
                .collect())
        }
        Format::Csv => {
            let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
            let mut rows = Vec::new();
            for rec in rdr.records() {
                let rec = rec?;
                let num = |i: usize| -> Result<f64> {
                    rec.get(i)
                        .unwrap_or("")
                        .parse()
                        .map_err(|_| crate::error::Error::Config(format!("bad number in window table: {rec:?}")))
                };
                rows.push(WindowRow {
                    from_year: num(0)? as i32,
                    to_year: num(1)? as i32,
                    years: num(2)? as u32,
                    cagr_f: num(3)?,
                    cagr_e: num(4)?,
                    difference: num(5)?,
                });
            }
            Ok(rows)
        }
        Format::Markdown => Err(crate::error::Error::Config("markdown tables are not parsed".into())),
    }
}

fn cell<T>(c: &Cell<T>, f: impl Fn(&T) -> String) -> String {
    match c {
        Cell::Value(v) => f(v),
        Cell::NotApplicable(reason) => format!("not applicable: {reason}"),
    }
}

fn method(m: Method) -> &'static str {
    match m {
        Method::Exact => "exact",
        Method::NormalApprox => "normal approx",
    }
}

fn dominance(d: &Dominance, order: &str) -> String {
    match d {
        Dominance::ExpDominates => format!("EXP-SIP {order}"),
        Dominance::FtdDominates => format!("FTD-SIP {order}"),
        Dominance::None => "none".into(),
    }
}

/// Metric rows in the order of the published comparison table.
fn metric_rows(reports: &[ComparisonReport]) -> Vec<(String, Vec<String>)> {
    let ci_label = reports
        .iter()
        .find_map(|r| r.bootstrap.value().map(|ci| format!("{}", ((1.0 - ci.alpha) * 100.0).round())))
        .unwrap_or_else(|| "95".into());
    let row = |name: &str, f: &dyn Fn(&ComparisonReport) -> String| -> (String, Vec<String>) {
        (name.to_string(), reports.iter().map(f).collect())
    };
    vec![
        row("Sample Size (n)", &|r| r.n.to_string()),
        row("Paired t-test (p-value)", &|r| cell(&r.t_test, |t| format!("{:.4}", t.p_value))),
        row("t-statistic", &|r| cell(&r.t_test, |t| format!("{:.3}", t.statistic))),
        row("Wilcoxon Signed-Rank (p-value)", &|r| {
            cell(&r.wilcoxon, |w| format!("{:.4} ({})", w.p_value, method(w.method)))
        }),
        row("Effect Size (Cohen's d)", &|r| match (&r.cohens_d, &r.d_label) {
            (Cell::Value(d), Cell::Value(l)) => format!("{:.3} ({})", d, l.as_str()),
            (c, _) => cell(c, |d| format!("{d:.3}")),
        }),
        row("Effect Size (Hedges' g)", &|r| cell(&r.hedges_g, |g| format!("{g:.3}"))),
        row(&format!("Bootstrap {ci_label}% CI (Mean Diff)"), &|r| {
            cell(&r.bootstrap, |ci| format!("[{:.3}, {:.3}]", ci.lower, ci.upper))
        }),
        row("Bootstrap Point Estimate (E-F)", &|r| {
            cell(&r.bootstrap, |ci| format!("{:.3}", ci.point_estimate))
        }),
        row("Stochastic Dominance: FSD", &|r| match (&r.fsd, &r.ks) {
            (Cell::Value(f), Cell::Value(ks)) => format!("{} (KS p={:.4})", dominance(f, "FSD"), ks.p_value),
            (c, _) => cell(c, |f| dominance(f, "FSD")),
        }),
        row("Stochastic Dominance (SSD)", &|r| cell(&r.ssd, |s| dominance(s, "SSD"))),
    ]
}

fn variant_name(v: HedgesVariant) -> &'static str {
    match v {
        HedgesVariant::Standard => "standard 1 - 3/(4(n-1)-1)",
        HedgesVariant::PaperCompat => "paper_compat 1 - 3/(4n-9)",
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Serialize)]
struct MetricsJson<'a> {
    reports: &'a [ComparisonReport],
}

pub fn render_metrics_table(reports: &[ComparisonReport], format: Format) -> String {
    match format {
        Format::Markdown => {
            let mut out = String::from("| Metric |");
            for r in reports {
                let _ = write!(out, " {} |", r.horizon);
            }
            out.push_str("\n|---|");
            out.push_str(&"---:|".repeat(reports.len()));
            out.push('\n');
            for (name, cells) in metric_rows(reports) {
                let _ = writeln!(out, "| {} | {} |", name, cells.join(" | "));
            }
            let variants: Vec<&str> = {
                let mut v: Vec<&str> = reports.iter().map(|r| variant_name(r.hedges_variant)).collect();
                v.dedup();
                v
            };
            let _ = writeln!(out, "\nHedges' g correction: {}.", variants.join(", "));
            if let Some(ci) = reports.iter().find_map(|r| r.bootstrap.value()) {
                let _ = writeln!(out, "Bootstrap: BCa, B = {}, seed = {}.", ci.resamples, ci.seed);
            }
            out.push_str("All p-values one-sided (H1: EXP outperforms FTD).\n");
            out
        }
        Format::Csv => {
            let mut out = String::from("metric");
            for r in reports {
                out.push(',');
                out.push_str(&csv_field(&r.horizon));
            }
            out.push('\n');
            for (name, cells) in metric_rows(reports) {
                out.push_str(&csv_field(&name));
                for c in cells {
                    out.push(',');
                    out.push_str(&csv_field(&c));
                }
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&MetricsJson { reports }).expect("plain data serializes");
            s.push('\n');
            s
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotEntry {
    pub horizon: String,
    pub strategy: String,
    #[serde(flatten)]
    pub summary: BoxplotSummary,
}

pub fn render_boxplots(entries: &[BoxplotEntry], format: Format) -> String {
    let list = |v: &[f64]| v.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>().join(" ");
    match format {
        Format::Markdown => {
            let mut out = String::from(
                "| Horizon | Strategy | n | Min | Q1 | Median | Q3 | Max | Whiskers | Outliers |\n|---|---|---:|---:|---:|---:|---:|---:|---|---|\n",
            );
            for e in entries {
                let s = &e.summary;
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {:.2} | {:.2} | {:.2} | {:.2} | {:.2} | {:.2} .. {:.2} | {} |",
                    e.horizon, e.strategy, s.n, s.min, s.q1, s.median, s.q3, s.max, s.whisker_low, s.whisker_high,
                    list(&s.outliers)
                );
            }
            out.push_str("\nQuartiles by linear interpolation between order statistics (type 7); whiskers at 1.5 IQR.\n");
            out
        }
        Format::Csv => {
            let mut out = String::from("horizon,strategy,n,min,q1,median,q3,max,whisker_low,whisker_high,outliers\n");
            for e in entries {
                let s = &e.summary;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    csv_field(&e.horizon), e.strategy, s.n, s.min, s.q1, s.median, s.q3, s.max, s.whisker_low,
                    s.whisker_high, list(&s.outliers)
                );
            }
            out
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(entries).expect("plain data serializes");
            s.push('\n');
            s
        }
    }
}

/// One schedule anomaly, as `{month, field, date, reason}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IssueRecord {
    pub month: String,
    pub field: String,
    pub date: Option<String>,
    pub reason: String,
    pub detail: String,
}

impl From<&ValidationIssue> for IssueRecord {
    fn from(i: &ValidationIssue) -> Self {
        let reason = serde_json::to_value(i.reason)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        Self {
            month: i.month.to_string(),
            field: i.field.to_string(),
            date: i.date.map(|d| d.format("%Y-%m-%d").to_string()),
            reason,
            detail: i.reason.to_string(),
        }
    }
}

pub fn render_issues(issues: &[ValidationIssue]) -> String {
    let records: Vec<IssueRecord> = issues.iter().map(IssueRecord::from).collect();
    let mut s = serde_json::to_string_pretty(&records).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(from: i32, to: i32, f: f64, e: f64, d: f64) -> WindowRow {
        WindowRow {
            from_year: from,
            to_year: to,
            years: (to - from + 1) as u32,
            cagr_f: f,
            cagr_e: e,
            difference: d,
        }
    }

    #[test]
    fn twenty_year_row() {
        let md = render_window_table(&[row(2005, 2024, 6.65, 6.68, 0.03)], Format::Markdown);
        assert!(md.contains("| 2005 | 2024 | 20 | 6.65 | 6.68 | 0.03 |"));
        let csv = render_window_table(&[row(2005, 2024, 6.65, 6.68, 0.03)], Format::Csv);
        assert_eq!(csv.lines().nth(1).unwrap(), "2005,2024,20,6.65,6.68,0.03,");
    }

    #[test]
    fn zero_difference_renders_plain() {
        let md = render_window_table(&[row(2010, 2010, 5.0, 5.0, -0.0)], Format::Markdown);
        assert!(md.contains("| 5.00 | 5.00 | 0.00 |"));
    }

    #[test]
    fn disagreeing_difference_surfaces_both() {
        // full-precision 60.434 / 62.936 -> columns 60.43 / 62.94, diff 2.50
        let r = row(2003, 2003, 60.43, 62.94, 2.50);
        assert_eq!(r.difference_of_rounded(), Some(2.51));
        let csv = render_window_table(&[r], Format::Csv);
        assert!(csv.ends_with("2.50,2.51\n"));
        assert!(render_window_table(&[r], Format::Markdown).contains("2003-2003: 2.51"));
        let json = render_window_table(&[r], Format::Json);
        assert!(json.contains("\"difference_of_rounded\": 2.51"));
    }

    #[test]
    fn csv_and_json_round_trip() {
        let rows = vec![row(2003, 2003, 60.43, 62.94, 2.51), row(2008, 2008, -30.08, -29.99, 0.09)];
        for f in [Format::Csv, Format::Json] {
            let text = render_window_table(&rows, f);
            let back = parse_window_table(&text, f).unwrap();
            assert_eq!(back, rows);
            assert_eq!(render_window_table(&back, f), text);
        }
    }

    #[test]
    fn round2_behaviour() {
        assert_eq!(round2(-0.001), 0.0);
        assert!(round2(-0.001).is_sign_positive());
        assert_eq!(round2(91.666_666), 91.67);
        assert_eq!(fixed2(0.0), "0.00");
    }
}
