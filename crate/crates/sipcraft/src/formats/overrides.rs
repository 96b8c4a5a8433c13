//! Schedule overrides: `year,month,ftd_dom,expiry_dom` with day-of-month
//! integers. Either day may be blank. A header row, blank lines and `#`
//! comments are allowed.

use sipcraft_core::calendar::{MonthKey, ScheduleTable};

use crate::error::{ParseError, ParseErrorKind};

/// Published first-trading-day / expiry table, December 2002 through
/// December 2024.
pub const PUBLISHED_OVERRIDES: &str = include_str!("../../data/published_schedule.csv");

fn int<T: std::str::FromStr>(s: &str, line: u64) -> Result<T, ParseError> {
    s.parse()
        .map_err(|_| ParseError::new(line, ParseErrorKind::Integer(s.to_string())))
}

pub fn load_schedule_overrides(text: &str) -> Result<ScheduleTable, ParseError> {
    let mut table = ScheduleTable::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i as u64 + 1;
        let row = raw.trim().trim_start_matches('\u{feff}');
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        if row.to_ascii_lowercase().starts_with("year") {
            continue;
        }
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(ParseError::new(
                line,
                ParseErrorKind::Row(format!("expected 4 fields, found {}", fields.len())),
            ));
        }
        let key = MonthKey::new(int(fields[0], line)?, int(fields[1], line)?)
            .map_err(|e| ParseError::new(line, e.into()))?;
        let day = |s: Option<&&str>| -> Result<_, ParseError> {
            match s.copied().filter(|s| !s.is_empty()) {
                None => Ok(None),
                Some(s) => key
                    .day(int(s, line)?)
                    .map(Some)
                    .map_err(|e| ParseError::new(line, e.into())),
            }
        };
        let ftd = day(fields.get(2))?;
        let expiry = day(fields.get(3))?;
        table
            .insert_override(key, ftd, expiry)
            .map_err(|e| ParseError::new(line, e.into()))?;
    }
    Ok(table)
}

pub fn write_schedule_overrides(table: &ScheduleTable) -> String {
    use chrono::Datelike;
    let mut out = String::from("year,month,ftd_dom,expiry_dom\n");
    let dom = |a: Option<sipcraft_core::Anchor>| a.map(|a| a.date.day().to_string()).unwrap_or_default();
    for e in table.entries() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            e.key.year(),
            e.key.month(),
            dom(e.first_trading_day),
            dom(e.expiry_day)
        ));
    }
    out
}
