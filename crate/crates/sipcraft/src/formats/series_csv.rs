//! Daily close CSV: a header row naming at least `date` and `close`
//! (case-insensitive, any position, extra columns ignored), ISO-8601 dates,
//! rows in either chronological order.

use std::collections::HashMap;

use chrono::NaiveDate;
use sipcraft_core::{IndexSeries, SeriesError, TradingDay};

use crate::error::{ParseError, ParseErrorKind};

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize, ParseError> {
    headers
        .iter()
        .position(|h| h.trim().trim_start_matches('\u{feff}').eq_ignore_ascii_case(name))
        .ok_or_else(|| ParseError::new(1, ParseErrorKind::Header(format!("no {name:?} column"))))
}

pub fn parse_series(text: &str) -> Result<IndexSeries, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| ParseError::new(1, ParseErrorKind::Header(e.to_string())))?
        .clone();
    let date_col = column(&headers, "date")?;
    let close_col = column(&headers, "close")?;

    let mut days = Vec::new();
    let mut seen: HashMap<NaiveDate, u64> = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            ParseError::new(line, ParseErrorKind::Row(e.to_string()))
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let field = |i: usize| record.get(i).unwrap_or("");
        let date = NaiveDate::parse_from_str(field(date_col), "%Y-%m-%d")
            .map_err(|_| ParseError::new(line, ParseErrorKind::Date(field(date_col).into())))?;
        let close: f64 = field(close_col)
            .parse()
            .map_err(|_| ParseError::new(line, ParseErrorKind::NonNumeric(field(close_col).into())))?;
        let day = TradingDay::new(date, close).map_err(|e| match e {
            SeriesError::InvalidClose { close, .. } if close.is_finite() => {
                ParseError::new(line, ParseErrorKind::NonPositive(close))
            }
            _ => ParseError::new(line, ParseErrorKind::NonNumeric(field(close_col).into())),
        })?;
        if let Some(&first_line) = seen.get(&date) {
            return Err(ParseError::new(line, ParseErrorKind::Duplicate { date, first_line }));
        }
        seen.insert(date, line);
        days.push(day);
    }
    IndexSeries::new(days).map_err(|_| ParseError::new(1, ParseErrorKind::Empty))
}

/// Writes `date,close`, ascending, closes in shortest round-trip form.
pub fn write_series(series: &IndexSeries) -> String {
    let mut out = String::from("date,close\n");
    for d in series.days() {
        out.push_str(&format!("{},{}\n", d.date().format("%Y-%m-%d"), d.close()));
    }
    out
}
