use proptest::prelude::*;
use sipcraft::bundle::{Bundle, Provenance, ScheduleInfo};
use sipcraft::config::RunConfig;
use sipcraft::fixtures::{synthetic_series, published_overrides, SyntheticSpec};
use sipcraft::pipeline::{compare, prepare_schedule, FileInfo};
use sipcraft::report::{
    parse_window_table, render_metrics_table, render_window_table, round2, Format, WindowRow,
};
use sipcraft_core::calendar::{MonthKey, Strategy as Plan};
use sipcraft_core::stats::battery::{run_battery, BatteryConfig};
use sipcraft_core::summary::boxplot_summary;
use sipcraft_core::PairedSample;

const PUBLISHED: &str = include_str!("fixtures/published_windows.csv");
const SCHEMA: &str = include_str!("../../../docs/report.schema.json");

fn column(years: u32, col: usize) -> Vec<f64> {
    PUBLISHED
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect::<Vec<_>>())
        .filter(|f| f[2] == years.to_string())
        .map(|f| f[col].parse().unwrap())
        .collect()
}

fn published_reports() -> Vec<sipcraft_core::stats::ComparisonReport> {
    let config = BatteryConfig {
        resamples: 2000,
        ..BatteryConfig::default()
    };
    [1, 3, 5]
        .iter()
        .map(|&y| {
            let s = PairedSample::new(column(y, 4), column(y, 3)).unwrap();
            run_battery(&s, &config, &format!("{y}-Year"))
        })
        .collect()
}

fn validator() -> jsonschema::Validator {
    let schema: serde_json::Value = serde_json::from_str(SCHEMA).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(json: &str) {
    let instance: serde_json::Value = serde_json::from_str(json).unwrap();
    let v = validator();
    let errors: Vec<String> = v.iter_errors(&instance).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn metrics_table_layout() {
    let md = render_metrics_table(&published_reports(), Format::Markdown);
    let lines: Vec<&str> = md.lines().collect();
    assert_eq!(lines[0], "| Metric | 1-Year | 3-Year | 5-Year |");
    let names: Vec<&str> = lines[2..12].iter().map(|l| l.split(" | ").next().unwrap().trim_start_matches("| ")).collect();
    assert_eq!(
        names,
        [
            "Sample Size (n)",
            "Paired t-test (p-value)",
            "t-statistic",
            "Wilcoxon Signed-Rank (p-value)",
            "Effect Size (Cohen's d)",
            "Effect Size (Hedges' g)",
            "Bootstrap 95% CI (Mean Diff)",
            "Bootstrap Point Estimate (E-F)",
            "Stochastic Dominance: FSD",
            "Stochastic Dominance (SSD)",
        ]
    );
    assert!(lines[2].ends_with("| 22 | 7 | 4 |"));
    assert!(lines[11].contains("EXP-SIP SSD"));
    let csv = render_metrics_table(&published_reports(), Format::Csv);
    assert!(csv.starts_with("metric,1-Year,3-Year,5-Year\nSample Size (n),22,7,4\n"));
}

#[test]
fn degenerate_report_keeps_not_applicable_cells() {
    let s = PairedSample::new(vec![5.0; 6], vec![5.0; 6]).unwrap();
    let r = vec![run_battery(&s, &BatteryConfig::default(), "1-Year")];
    let md = render_metrics_table(&r, Format::Markdown);
    assert_eq!(md.matches("not applicable: degenerate").count(), 9);
    let csv = render_metrics_table(&r, Format::Csv);
    assert_eq!(csv.matches("not applicable: degenerate").count(), 9);
    let json = render_metrics_table(&r, Format::Json);
    assert_eq!(json.matches("\"not_applicable\"").count(), 9);
    assert_valid(&json);
}

#[test]
fn metrics_json_matches_schema() {
    assert_valid(&render_metrics_table(&published_reports(), Format::Json));
}

#[test]
fn bundle_json_matches_schema() {
    let series = synthetic_series(&SyntheticSpec::default()).unwrap();
    // an expiry after the last Thursday is reported but kept
    let overrides = sipcraft::formats::load_schedule_overrides("2012,10,1,29\n").unwrap();
    let config = RunConfig {
        durations: vec![1, 3, 5, 10, 20],
        stats: BatteryConfig {
            resamples: 1000,
            ..BatteryConfig::default()
        },
        ..RunConfig::default()
    };
    let build = prepare_schedule(&series, Some(&overrides), &config.durations).unwrap();
    assert_eq!(build.issues.len(), 1);
    let horizons = compare(&config, &series, &build.table).unwrap();
    let bundle = Bundle {
        provenance: Provenance::new(
            FileInfo {
                path: "synthetic.csv".into(),
                sha256: "0".repeat(64),
                bytes: 1,
            },
            &series,
            ScheduleInfo {
                source: "overrides".into(),
                file: None,
            },
            config,
        ),
        schedule_issues: build.issues.iter().map(Into::into).collect(),
        horizons,
    };
    let json = bundle.render(Format::Json);
    assert_valid(&json);
    let broken = json.replacen("\"exp_dominates\"", "\"maybe\"", 1).replacen("\"none\"", "\"maybe\"", 1);
    assert!(!validator().is_valid(&serde_json::from_str(&broken).unwrap()));
    assert!(json.contains("\"expiry_after_last_thursday\""));
    let md = bundle.render(Format::Markdown);
    assert!(md.contains("## 20-Year windows"));
    assert!(md.contains("not applicable: n too small (n = 1)"));
}

/// Sort, then interpolate between order statistics at h = (n - 1) p.
fn oracle_quantile(xs: &[f64], p: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = (v.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

#[test]
fn boxplot_of_one_year_ftd_cagrs_matches_order_statistics() {
    let ftd = column(1, 3);
    let b = boxplot_summary(&ftd).unwrap();
    for (got, p) in [(b.q1, 0.25), (b.median, 0.5), (b.q3, 0.75)] {
        assert!((got - oracle_quantile(&ftd, p)).abs() < 1e-12, "p = {p}");
    }
    let iqr = b.q3 - b.q1;
    for o in &b.outliers {
        assert!(*o < b.q1 - 1.5 * iqr || *o > b.q3 + 1.5 * iqr);
    }
    let inside = ftd.iter().filter(|x| !b.outliers.contains(x)).count();
    assert_eq!(inside + b.outliers.len(), ftd.len());
}

#[test]
fn published_schedule_orders_exp_before_ftd() {
    let t = published_overrides().unwrap();
    let mut checked = 0;
    let mut key = MonthKey::new(2003, 1).unwrap();
    while key <= MonthKey::new(2024, 12).unwrap() {
        if let (Ok(e), Ok(f)) = (t.execution_date(Plan::Exp, key), t.execution_date(Plan::Ftd, key)) {
            assert!(e < f, "{key}: {e} !< {f}");
            checked += 1;
        }
        key = key.next();
    }
    assert!(checked > 250);
}

fn row_strategy() -> impl Strategy<Value = WindowRow> {
    (2000i32..2030, 1u32..=20, -5000i64..5000, -5000i64..5000).prop_map(|(from, years, f, e)| {
        let cagr_f = f as f64 / 100.0;
        let cagr_e = e as f64 / 100.0;
        WindowRow {
            from_year: from,
            to_year: from + years as i32 - 1,
            years,
            cagr_f,
            cagr_e,
            // a full-precision difference near the rounded one
            difference: round2(cagr_e - cagr_f + 0.004),
        }
    })
}

proptest! {
    #[test]
    fn window_tables_round_trip(rows in prop::collection::vec(row_strategy(), 1..30)) {
        for f in [Format::Csv, Format::Json] {
            let text = render_window_table(&rows, f);
            let back = parse_window_table(&text, f).unwrap();
            prop_assert_eq!(&back, &rows);
            prop_assert_eq!(render_window_table(&back, f), text);
        }
    }

    #[test]
    fn window_table_rendering_is_deterministic(rows in prop::collection::vec(row_strategy(), 1..10)) {
        prop_assert_eq!(render_window_table(&rows, Format::Markdown), render_window_table(&rows, Format::Markdown));
    }

    #[test]
    fn difference_uses_full_precision(f in -60.0f64..60.0, d in -3.0f64..3.0) {
        use sipcraft_core::sip::{SipPlan, SipResult, Window, WindowOutcome};
        let result = |strategy, cagr| SipResult {
            plan: SipPlan::new(strategy, 2003, 1, 1000.0).unwrap(),
            units: 1.0,
            invested: 12_000.0,
            terminal_date: chrono::NaiveDate::from_ymd_opt(2003, 12, 31).unwrap(),
            terminal_close: 1.0,
            final_value: 1.0,
            cagr_percent: cagr,
            executions: Vec::new(),
        };
        let o = WindowOutcome {
            window: Window::new(2003, 2003),
            ftd: result(sipcraft_core::Strategy::Ftd, f),
            exp: result(sipcraft_core::Strategy::Exp, f + d),
        };
        let row = WindowRow::from_outcome(&o);
        prop_assert_eq!(row.difference, round2((f + d) - f));
        prop_assert_eq!(row.cagr_f, round2(f));
    }
}
