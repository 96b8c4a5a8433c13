use std::path::PathBuf;

use sipcraft_core::{CalendarError, SeriesError, SipError, StatsError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseErrorKind {
    #[error("missing or malformed header: {0}")]
    Header(String),
    #[error("malformed row: {0}")]
    Row(String),
    #[error("malformed date {0:?} (expected YYYY-MM-DD)")]
    Date(String),
    #[error("non-numeric close {0:?}")]
    NonNumeric(String),
    #[error("non-positive close {0}")]
    NonPositive(f64),
    #[error("duplicate date {date} (first seen on line {first_line})")]
    Duplicate { date: chrono::NaiveDate, first_line: u64 },
    #[error("malformed integer {0:?}")]
    Integer(String),
    #[error(transparent)]
    Calendar(#[from] CalendarError),
    #[error("no data rows")]
    Empty,
}

#[derive(Debug, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: u64,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(line: u64, kind: ParseErrorKind) -> Self {
        Self { line, kind }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Sip(#[from] SipError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
