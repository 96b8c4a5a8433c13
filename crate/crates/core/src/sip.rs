//! SIP simulation: monthly fixed-amount purchases of fractional index units,
//! valued at the last close of December in the final year.
//!
//! With `m` invested per month over `N` years, purchase prices `p_i` and
//! terminal close `p_L`:
//!
//! ```text
//! units = sum_i m / p_i
//! final = p_L * units
//! CAGR  = ((final / (12 m N))^(1/N) - 1) * 100
//! ```
//!
//! `m` cancels, so CAGR depends only on prices and `N`;
//! [`cagr_via_lemma`] evaluates that amount-free form directly.

use alloc::vec::Vec;
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calendar::{CalendarError, MonthKey, ScheduleTable, Strategy};
use crate::series::{IndexSeries, SeriesError};
use crate::stats::{PairedSample, StatsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SipError {
    #[error("plan must run at least one year")]
    ZeroYears,
    #[error("monthly amount must be positive and finite, got {0}")]
    InvalidAmount(f64),
    #[error("invested amount must be positive, got {0}")]
    NonPositiveInvested(f64),
    #[error("final value must be non-negative, got {0}")]
    NegativeFinalValue(f64),
    #[error("unsupported window duration {0} (expected 1, 3, 5, 10 or 20)")]
    UnsupportedDuration(u32),
    #[error("installment {month}: {source}")]
    Schedule {
        month: MonthKey,
        #[source]
        source: CalendarError,
    },
    #[error("installment {month}: {source}")]
    Price {
        month: MonthKey,
        #[source]
        source: SeriesError,
    },
    #[error("terminal valuation: {0}")]
    Terminal(#[source] SeriesError),
    #[error(transparent)]
    Sample(#[from] StatsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SipPlan {
    pub strategy: Strategy,
    pub start_year: i32,
    pub years: u32,
    pub monthly_amount: f64,
}

impl SipPlan {
    pub fn new(strategy: Strategy, start_year: i32, years: u32, monthly_amount: f64) -> Result<Self, SipError> {
        let plan = Self {
            strategy,
            start_year,
            years,
            monthly_amount,
        };
        plan.validate()?;
        Ok(plan)
    }

    fn validate(&self) -> Result<(), SipError> {
        if self.years == 0 {
            return Err(SipError::ZeroYears);
        }
        if !(self.monthly_amount.is_finite() && self.monthly_amount > 0.0) {
            return Err(SipError::InvalidAmount(self.monthly_amount));
        }
        Ok(())
    }

    pub fn final_year(&self) -> i32 {
        self.start_year + self.years as i32 - 1
    }

    pub fn installments(&self) -> usize {
        12 * self.years as usize
    }

    /// Installment months, January of the start year through December of the
    /// final year.
    pub fn months(&self) -> impl Iterator<Item = MonthKey> {
        let first = MonthKey::new(self.start_year, 1).expect("January is valid");
        core::iter::successors(Some(first), |k| Some(k.next())).take(self.installments())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Execution {
    pub month: MonthKey,
    pub date: NaiveDate,
    pub price: f64,
    pub units: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SipResult {
    pub plan: SipPlan,
    pub units: f64,
    pub invested: f64,
    pub terminal_date: NaiveDate,
    pub terminal_close: f64,
    pub final_value: f64,
    pub cagr_percent: f64,
    pub executions: Vec<Execution>,
}

fn execution_price(
    plan: &SipPlan,
    month: MonthKey,
    series: &IndexSeries,
    table: &ScheduleTable,
) -> Result<(NaiveDate, f64), SipError> {
    let date = table
        .execution_date(plan.strategy, month)
        .map_err(|source| SipError::Schedule { month, source })?;
    let price = series
        .close_on(date)
        .map_err(|source| SipError::Price { month, source })?;
    Ok((date, price))
}

fn terminal(plan: &SipPlan, series: &IndexSeries) -> Result<(NaiveDate, f64), SipError> {
    let date = series
        .last_trading_day_of_year(plan.final_year())
        .map_err(SipError::Terminal)?;
    let close = series.close_on(date).map_err(SipError::Terminal)?;
    Ok((date, close))
}

/// Runs the plan and values it at the last trading day of the final year.
pub fn simulate(plan: &SipPlan, series: &IndexSeries, table: &ScheduleTable) -> Result<SipResult, SipError> {
    plan.validate()?;
    let m = plan.monthly_amount;
    let mut executions = Vec::with_capacity(plan.installments());
    let mut units = 0.0;
    for month in plan.months() {
        let (date, price) = execution_price(plan, month, series, table)?;
        let q = m / price;
        units += q;
        executions.push(Execution {
            month,
            date,
            price,
            units: q,
        });
    }
    let (terminal_date, terminal_close) = terminal(plan, series)?;
    let invested = 12.0 * m * plan.years as f64;
    let final_value = terminal_close * units;
    Ok(SipResult {
        plan: *plan,
        units,
        invested,
        terminal_date,
        terminal_close,
        final_value,
        cagr_percent: cagr(final_value, invested, plan.years)?,
        executions,
    })
}

/// Annualized total-value ratio, in percent. Not an IRR.
pub fn cagr(final_value: f64, invested: f64, years: u32) -> Result<f64, SipError> {
    if invested.is_nan() || invested <= 0.0 {
        return Err(SipError::NonPositiveInvested(invested));
    }
    if final_value.is_nan() || final_value < 0.0 {
        return Err(SipError::NegativeFinalValue(final_value));
    }
    if years == 0 {
        return Err(SipError::ZeroYears);
    }
    Ok((libm::pow(final_value / invested, 1.0 / years as f64) - 1.0) * 100.0)
}

/// CAGR from prices alone: `((p_L * sum 1/p_i) / 12N)^(1/N) - 1`, in percent.
/// The plan's amount is ignored.
pub fn cagr_via_lemma(series: &IndexSeries, table: &ScheduleTable, plan: &SipPlan) -> Result<f64, SipError> {
    if plan.years == 0 {
        return Err(SipError::ZeroYears);
    }
    let mut inverse_sum = 0.0;
    for month in plan.months() {
        let (_, price) = execution_price(plan, month, series, table)?;
        inverse_sum += 1.0 / price;
    }
    let (_, close) = terminal(plan, series)?;
    let n = plan.years as f64;
    let ratio = close * inverse_sum / (12.0 * n);
    Ok((libm::pow(ratio, 1.0 / n) - 1.0) * 100.0)
}

/// Calendar-year span `[from_year, to_year]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Window {
    pub from_year: i32,
    pub to_year: i32,
}

impl Window {
    pub fn new(from_year: i32, to_year: i32) -> Self {
        debug_assert!(from_year <= to_year);
        Self { from_year, to_year }
    }

    pub fn years(&self) -> u32 {
        (self.to_year - self.from_year + 1) as u32
    }
}

pub const DURATIONS: [u32; 5] = [1, 3, 5, 10, 20];

/// Non-overlapping windows for a duration, all ending by 2024:
/// yearly from 2003; triennial from 2004; quinquennial, decadal and the
/// single 20-year window from 2005.
pub fn enumerate_windows(duration: u32) -> Result<Vec<Window>, SipError> {
    let (first, count) = match duration {
        1 => (2003, 22),
        3 => (2004, 7),
        5 => (2005, 4),
        10 => (2005, 2),
        20 => (2005, 1),
        other => return Err(SipError::UnsupportedDuration(other)),
    };
    Ok((0..count)
        .map(|k| {
            let from = first + k * duration as i32;
            Window::new(from, from + duration as i32 - 1)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowOutcome {
    pub window: Window,
    pub ftd: SipResult,
    pub exp: SipResult,
}

impl WindowOutcome {
    pub fn cagr_f(&self) -> f64 {
        self.ftd.cagr_percent
    }

    pub fn cagr_e(&self) -> f64 {
        self.exp.cagr_percent
    }

    /// EXP minus FTD, full precision.
    pub fn difference(&self) -> f64 {
        self.cagr_e() - self.cagr_f()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairedRun {
    pub duration: u32,
    pub outcomes: Vec<WindowOutcome>,
    pub sample: PairedSample,
}

/// Simulates both strategies over one window.
pub fn run_window(
    window: Window,
    series: &IndexSeries,
    table: &ScheduleTable,
    monthly_amount: f64,
) -> Result<WindowOutcome, SipError> {
    let run = |strategy| {
        let plan = SipPlan::new(strategy, window.from_year, window.years(), monthly_amount)?;
        simulate(&plan, series, table)
    };
    Ok(WindowOutcome {
        window,
        ftd: run(Strategy::Ftd)?,
        exp: run(Strategy::Exp)?,
    })
}

/// Builds the paired run from per-window outcomes, ordered by start year.
pub fn assemble_paired_run(duration: u32, mut outcomes: Vec<WindowOutcome>) -> Result<PairedRun, SipError> {
    outcomes.sort_by_key(|o| o.window);
    let sample = PairedSample::new(
        outcomes.iter().map(WindowOutcome::cagr_e).collect(),
        outcomes.iter().map(WindowOutcome::cagr_f).collect(),
    )?;
    Ok(PairedRun {
        duration,
        outcomes,
        sample,
    })
}

/// FTD and EXP CAGRs for every window of `duration`.
pub fn paired_run(
    duration: u32,
    series: &IndexSeries,
    table: &ScheduleTable,
    monthly_amount: f64,
) -> Result<PairedRun, SipError> {
    let outcomes = enumerate_windows(duration)?
        .into_iter()
        .map(|w| run_window(w, series, table, monthly_amount))
        .collect::<Result<Vec<_>, _>>()?;
    assemble_paired_run(duration, outcomes)
}
