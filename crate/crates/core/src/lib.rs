//! Core engine for comparing monthly systematic-investment plans executed on
//! two schedules: the first trading day of each month, and the derivatives
//! expiry day of the previous month.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; file formats, parallel resampling and the command
//! line live in the `sipcraft` crate.
//!
//! - [`series`]: validated daily close series and lookups.
//! - [`calendar`]: execution anchors per month (first trading day, expiry).
//! - [`sip`]: unit accumulation, terminal valuation, CAGR, window grid.
//! - [`stats`]: paired tests, effect sizes, BCa bootstrap, ECDF/KS, dominance.
//! - [`summary`]: quantiles and boxplot statistics.

#![no_std]

extern crate alloc;

pub mod calendar;
pub mod series;
pub mod sip;
pub mod stats;
pub mod summary;

pub use calendar::{
    Anchor, AnchorField, AnchorSource, CalendarError, IssueReason, MonthKey, MonthRange,
    MonthSchedule, ScheduleBuild, ScheduleTable, Strategy, ValidationIssue,
};
pub use series::{IndexSeries, SeriesError, TradingDay};
pub use sip::{Execution, PairedRun, SipError, SipPlan, SipResult, Window, WindowOutcome};
pub use stats::{PairedSample, StatsError};
