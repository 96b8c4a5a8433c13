//! File formats, reporting, parallel execution and the command line for the
//! sipcraft SIP timing backtester. The arithmetic and statistics live in
//! `sipcraft-core`.

pub mod bundle;
pub mod cli;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod parallel;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};
