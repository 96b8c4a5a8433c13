//! Command-line surface. Exit status: 0 success, 1 validation anomalies or
//! data that cannot support the run, 2 I/O or configuration errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sipcraft_core::calendar::{build_schedule, MonthKey, MonthRange, Strategy};
use sipcraft_core::sip::{simulate, SipPlan, SipResult};
use sipcraft_core::stats::{HedgesVariant, WilcoxonMode};
use sipcraft_core::{IndexSeries, ScheduleTable};

use crate::bundle::{Bundle, Provenance, ScheduleInfo};
use crate::config::{Overrides, RunConfig, SEED_ENV};
use crate::error::Error;
use crate::fixtures::{synthetic_series, published_overrides, Shape, SyntheticSpec};
use crate::formats::{write_schedule_overrides, write_series};
use crate::pipeline::{compare, load_overrides, load_series, prepare_schedule, FileInfo};
use crate::report::{render_issues, round2, Format, IssueRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ANOMALY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sipcraft", version, about = "Backtest monthly SIP timing: first trading day vs F&O expiry day")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the series parses and every schedule anchor resolves.
    Validate(CommonArgs),
    /// Run one strategy over one window and print its purchase ledger.
    Simulate(SimulateArgs),
    /// Run both strategies over every window and the full statistical battery.
    Compare(CompareArgs),
    /// Write synthetic series or the bundled schedule overrides.
    Fixtures(FixturesArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Daily close CSV with `date` and `close` columns.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Schedule overrides CSV (`year,month,ftd_dom,expiry_dom`). Without it
    /// anchors are computed from the series.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    /// Use the bundled historical schedule overrides.
    #[arg(long, conflicts_with = "schedule")]
    pub bundled_schedule: bool,
    /// Window lengths in years, from 1, 3, 5, 10, 20.
    #[arg(long, value_delimiter = ',')]
    pub durations: Option<Vec<u32>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub strategy: StrategyArg,
    /// First calendar year of the plan.
    #[arg(long)]
    pub start: i32,
    #[arg(long, default_value_t = 1)]
    pub years: u32,
    #[arg(long)]
    pub amount: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub amount: Option<f64>,
    /// Bootstrap seed. Falls back to the config file, then SIPCRAFT_SEED.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Bootstrap resamples (at least 1000).
    #[arg(long)]
    pub resamples: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum)]
    pub wilcoxon: Option<WilcoxonArg>,
    #[arg(long, value_enum)]
    pub hedges: Option<HedgesArg>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct FixturesArgs {
    #[arg(long, value_enum, default_value_t = FixtureKind::Walk)]
    pub kind: FixtureKind,
    #[arg(long, default_value = "2002-12-01")]
    pub from: NaiveDate,
    #[arg(long, default_value = "2024-12-31")]
    pub to: NaiveDate,
    /// Flat level, or starting level of the walk.
    #[arg(long, default_value_t = 1000.0)]
    pub level: f64,
    /// Daily log-return volatility of the walk.
    #[arg(long, default_value_t = 0.012)]
    pub volatility: f64,
    #[arg(long, default_value_t = 0.0004)]
    pub drift: f64,
    /// Share of weekdays dropped as holidays.
    #[arg(long, default_value_t = 0.0)]
    pub holidays: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Ftd,
    Exp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WilcoxonArg {
    Auto,
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum HedgesArg {
    Standard,
    PaperCompat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FixtureKind {
    Flat,
    Walk,
    Overrides,
}

/// Failure carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } | Error::Parse { .. } | Error::Config(_) | Error::Json(_) | Error::Csv(_) => EXIT_INPUT,
            Error::Series(_) | Error::Sip(_) | Error::Stats(_) => EXIT_ANOMALY,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Runs the CLI, writing to the given streams, and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    let result = match cli.command {
        Command::Validate(a) => cmd_validate(a, env_seed.as_deref(), stdout, stderr),
        Command::Simulate(a) => cmd_simulate(a, env_seed.as_deref(), stdout, stderr),
        Command::Compare(a) => cmd_compare(a, env_seed.as_deref(), stdout, stderr),
        Command::Fixtures(a) => cmd_fixtures(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn common_overrides(c: &CommonArgs) -> Overrides {
    Overrides {
        data: c.data.clone(),
        schedule: c.schedule.clone(),
        durations: c.durations.clone(),
        out: c.out.clone(),
        ..Default::default()
    }
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| {
            Error::Io {
                path: p.to_path_buf(),
                source,
            }
            .into()
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| {
            Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }
            .into()
        }),
    }
}

struct Inputs {
    series: IndexSeries,
    data_info: FileInfo,
    overrides: Option<ScheduleTable>,
    schedule_info: ScheduleInfo,
}

fn load_inputs(cfg: &RunConfig, bundled: bool) -> Result<Inputs, Failure> {
    let data = cfg
        .data
        .as_deref()
        .ok_or_else(|| Failure::from(Error::Config("no data file given (use --data)".into())))?;
    let (series, data_info) = load_series(data)?;
    let (overrides, schedule_info) = if bundled {
        let table = published_overrides().map_err(|source| Error::Parse {
            path: PathBuf::from("<bundled overrides>"),
            source,
        })?;
        (
            Some(table),
            ScheduleInfo {
                source: "overrides (bundled)".into(),
                file: None,
            },
        )
    } else if let Some(p) = cfg.schedule.as_deref() {
        let (table, info) = load_overrides(p)?;
        (
            Some(table),
            ScheduleInfo {
                source: "overrides".into(),
                file: Some(info),
            },
        )
    } else {
        (
            None,
            ScheduleInfo {
                source: "computed".into(),
                file: None,
            },
        )
    };
    Ok(Inputs {
        series,
        data_info,
        overrides,
        schedule_info,
    })
}

fn cmd_validate(a: CommonArgs, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let mut flags = common_overrides(&a);
    if flags.durations.is_none() && a.config.is_none() {
        flags.durations = Some(vec![1, 3, 5, 10, 20]);
    }
    let cfg = RunConfig::resolve(a.config.as_deref(), flags, env_seed)?;
    let inputs = load_inputs(&cfg, a.bundled_schedule)?;
    let build = prepare_schedule(&inputs.series, inputs.overrides.as_ref(), &cfg.durations_sorted())?;
    emit(&render_issues(&build.issues), cfg.out.as_deref(), stdout)?;
    if build.is_clean() {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(stderr, "{} schedule anomalies", build.issues.len());
        Ok(EXIT_ANOMALY)
    }
}

#[derive(Serialize)]
struct SimulateJson<'a> {
    strategy: &'a str,
    start_year: i32,
    years: u32,
    monthly_amount: f64,
    units: f64,
    invested: f64,
    terminal_date: String,
    terminal_close: f64,
    final_value: f64,
    cagr_percent: f64,
    ledger: Vec<LedgerRow>,
}

#[derive(Serialize)]
struct LedgerRow {
    month: String,
    date: String,
    price: f64,
    units: f64,
}

fn render_simulation(r: &SipResult, format: Format) -> String {
    use std::fmt::Write as _;
    let ledger: Vec<LedgerRow> = r
        .executions
        .iter()
        .map(|e| LedgerRow {
            month: e.month.to_string(),
            date: e.date.to_string(),
            price: e.price,
            units: e.units,
        })
        .collect();
    let mut out = String::new();
    match format {
        Format::Json => {
            let j = SimulateJson {
                strategy: r.plan.strategy.label(),
                start_year: r.plan.start_year,
                years: r.plan.years,
                monthly_amount: r.plan.monthly_amount,
                units: r.units,
                invested: r.invested,
                terminal_date: r.terminal_date.to_string(),
                terminal_close: r.terminal_close,
                final_value: r.final_value,
                cagr_percent: r.cagr_percent,
                ledger,
            };
            out = serde_json::to_string_pretty(&j).expect("plain data serializes");
            out.push('\n');
        }
        Format::Csv => {
            out.push_str("month,date,price,units\n");
            for l in &ledger {
                let _ = writeln!(out, "{},{},{},{}", l.month, l.date, l.price, l.units);
            }
            let _ = writeln!(out, "# terminal {} close {}", r.terminal_date, r.terminal_close);
            let _ = writeln!(out, "# final_value {} invested {}", r.final_value, r.invested);
            let _ = writeln!(out, "# cagr_percent {:.2}", round2(r.cagr_percent));
        }
        Format::Markdown => {
            let _ = writeln!(
                out,
                "# {} SIP {}-{}\n\n| Month | Date | Price | Units |\n|---|---|---:|---:|",
                r.plan.strategy.label(),
                r.plan.start_year,
                r.plan.final_year()
            );
            for l in &ledger {
                let _ = writeln!(out, "| {} | {} | {:.2} | {:.6} |", l.month, l.date, l.price, l.units);
            }
            let _ = writeln!(
                out,
                "\n- units: {:.6}\n- invested: {:.2}\n- valued at: {} (close {:.2})\n- final value: {:.2}\n- CAGR: {:.2}%",
                r.units,
                r.invested,
                r.terminal_date,
                r.terminal_close,
                r.final_value,
                round2(r.cagr_percent)
            );
        }
    }
    out
}

fn cmd_simulate(a: SimulateArgs, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let mut flags = common_overrides(&a.common);
    flags.amount = a.amount;
    flags.format = a.format;
    let cfg = RunConfig::resolve(a.common.config.as_deref(), flags, env_seed)?;
    let inputs = load_inputs(&cfg, a.common.bundled_schedule)?;
    let strategy = match a.strategy {
        StrategyArg::Ftd => Strategy::Ftd,
        StrategyArg::Exp => Strategy::Exp,
    };
    let plan = SipPlan::new(strategy, a.start, a.years, cfg.amount).map_err(Error::from)?;
    let range = MonthRange::new(
        MonthKey::new(plan.start_year - 1, 12).map_err(|e| Error::Config(e.to_string()))?,
        MonthKey::new(plan.final_year(), 12).map_err(|e| Error::Config(e.to_string()))?,
    );
    let build = build_schedule(&inputs.series, inputs.overrides.as_ref(), range);
    for i in &build.issues {
        let r = IssueRecord::from(i);
        let _ = writeln!(stderr, "warning: {} {}: {}", r.month, r.field, r.detail);
    }
    let result = simulate(&plan, &inputs.series, &build.table).map_err(Error::from)?;
    emit(&render_simulation(&result, cfg.format), cfg.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_compare(a: CompareArgs, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let mut flags = common_overrides(&a.common);
    flags.amount = a.amount;
    flags.seed = a.seed;
    flags.resamples = a.resamples;
    flags.alpha = a.alpha;
    flags.format = a.format;
    flags.wilcoxon_mode = a.wilcoxon.map(|w| match w {
        WilcoxonArg::Auto => WilcoxonMode::Auto,
        WilcoxonArg::Exact => WilcoxonMode::Exact,
        WilcoxonArg::Normal => WilcoxonMode::NormalApprox,
    });
    flags.hedges_variant = a.hedges.map(|h| match h {
        HedgesArg::Standard => HedgesVariant::Standard,
        HedgesArg::PaperCompat => HedgesVariant::PaperCompat,
    });
    let cfg = RunConfig::resolve(a.common.config.as_deref(), flags, env_seed)?;
    let inputs = load_inputs(&cfg, a.common.bundled_schedule)?;
    let build = prepare_schedule(&inputs.series, inputs.overrides.as_ref(), &cfg.durations_sorted())?;
    for i in &build.issues {
        let r = IssueRecord::from(i);
        let _ = writeln!(stderr, "warning: {} {}: {}", r.month, r.field, r.detail);
    }
    let horizons = compare(&cfg, &inputs.series, &build.table)?;
    let bundle = Bundle {
        provenance: Provenance::new(inputs.data_info, &inputs.series, inputs.schedule_info, cfg.clone()),
        schedule_issues: build.issues.iter().map(IssueRecord::from).collect(),
        horizons,
    };
    emit(&bundle.render(cfg.format), cfg.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_fixtures(a: FixturesArgs, stdout: &mut dyn Write) -> CmdResult {
    let text = match a.kind {
        FixtureKind::Overrides => {
            let table = published_overrides().map_err(|source| Error::Parse {
                path: PathBuf::from("<bundled overrides>"),
                source,
            })?;
            write_schedule_overrides(&table)
        }
        kind => {
            let shape = match kind {
                FixtureKind::Flat => Shape::Flat { level: a.level },
                _ => Shape::Walk {
                    start: a.level,
                    drift: a.drift,
                    volatility: a.volatility,
                },
            };
            if !(0.0..1.0).contains(&a.holidays) {
                return Err(Error::Config(format!("holiday share must lie in [0, 1), got {}", a.holidays)).into());
            }
            let series = synthetic_series(&SyntheticSpec {
                start: a.from,
                end: a.to,
                shape,
                holiday_rate: a.holidays,
                seed: a.seed,
            })
            .map_err(|e| Error::Config(format!("cannot build fixture: {e}")))?;
            write_series(&series)
        }
    };
    emit(&text, a.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}
