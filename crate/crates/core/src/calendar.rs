//! Monthly execution anchors.
//!
//! Each month carries two anchors: its first trading day and its derivatives
//! expiry day. Anchors come either from an override table (exchange-published
//! dates) or from rules evaluated against the price series. The series is the
//! only holiday oracle: a date is a trading day iff it has a close.
//!
//! Expiry is the last Thursday of the month, moved backward one calendar day
//! at a time until a trading day is found. It never moves forward, so it can
//! never spill into the next month.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use chrono::{Datelike, Duration, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::IndexSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalendarError {
    #[error("month {0} out of range 1..=12")]
    InvalidMonth(u32),
    #[error("day {day} is not a valid day of {key}")]
    InvalidDay { key: MonthKey, day: u32 },
    #[error("{field} {date} does not fall in {key}")]
    OutsideMonth {
        key: MonthKey,
        field: AnchorField,
        date: NaiveDate,
    },
    #[error("duplicate schedule entry for {0}")]
    DuplicateKey(MonthKey),
    #[error("no trading days in {0}")]
    NoTradingDays(MonthKey),
    #[error("no trading day at or before the last Thursday of {0}")]
    NoExpiry(MonthKey),
    #[error("schedule has no {field} for {key}")]
    MissingEntry { key: MonthKey, field: AnchorField },
}

/// A calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MonthKey {
    year: i32,
    month: u32,
}

impl MonthKey {
    pub fn new(year: i32, month: u32) -> Result<Self, CalendarError> {
        if !(1..=12).contains(&month) {
            return Err(CalendarError::InvalidMonth(month));
        }
        Ok(Self { year, month })
    }

    pub fn of(date: NaiveDate) -> Self {
        Self {
            year: date.year(),
            month: date.month(),
        }
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> u32 {
        self.month
    }

    pub fn next(&self) -> Self {
        if self.month == 12 {
            Self {
                year: self.year + 1,
                month: 1,
            }
        } else {
            Self {
                year: self.year,
                month: self.month + 1,
            }
        }
    }

    pub fn prev(&self) -> Self {
        if self.month == 1 {
            Self {
                year: self.year - 1,
                month: 12,
            }
        } else {
            Self {
                year: self.year,
                month: self.month - 1,
            }
        }
    }

    pub fn first_day(&self) -> NaiveDate {
        NaiveDate::from_ymd_opt(self.year, self.month, 1).expect("month validated")
    }

    pub fn last_day(&self) -> NaiveDate {
        self.next().first_day() - Duration::days(1)
    }

    /// `day` as a date in this month.
    pub fn day(&self, day: u32) -> Result<NaiveDate, CalendarError> {
        NaiveDate::from_ymd_opt(self.year, self.month, day)
            .ok_or(CalendarError::InvalidDay { key: *self, day })
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        date.year() == self.year && date.month() == self.month
    }

    pub fn last_thursday(&self) -> NaiveDate {
        let last = self.last_day();
        let back = (last.weekday().num_days_from_monday() + 7
            - Weekday::Thu.num_days_from_monday())
            % 7;
        last - Duration::days(back as i64)
    }
}

impl fmt::Display for MonthKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// Inclusive range of months.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonthRange {
    pub start: MonthKey,
    pub end: MonthKey,
}

impl MonthRange {
    pub fn new(start: MonthKey, end: MonthKey) -> Self {
        Self { start, end }
    }

    pub fn iter(&self) -> impl Iterator<Item = MonthKey> {
        let end = self.end;
        core::iter::successors(Some(self.start), |k| Some(k.next())).take_while(move |k| *k <= end)
    }

    pub fn contains(&self, key: MonthKey) -> bool {
        self.start <= key && key <= self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// First trading day of the installment month.
    #[serde(alias = "FTD")]
    Ftd,
    /// Expiry day of the month before the installment month.
    #[serde(alias = "EXP")]
    Exp,
}

impl Strategy {
    pub const ALL: [Strategy; 2] = [Strategy::Ftd, Strategy::Exp];

    pub fn label(&self) -> &'static str {
        match self {
            Strategy::Ftd => "FTD",
            Strategy::Exp => "EXP",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnchorField {
    FirstTradingDay,
    ExpiryDay,
}

impl fmt::Display for AnchorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnchorField::FirstTradingDay => "first_trading_day",
            AnchorField::ExpiryDay => "expiry_day",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnchorSource {
    Override,
    Computed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anchor {
    pub date: NaiveDate,
    pub source: AnchorSource,
}

/// Anchors of one month. Either anchor may be absent: override tables can be
/// half-populated at their edges (an expiry-only month before the first plan,
/// a blank expiry after the last).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonthSchedule {
    pub key: MonthKey,
    pub first_trading_day: Option<Anchor>,
    pub expiry_day: Option<Anchor>,
}

impl MonthSchedule {
    pub fn empty(key: MonthKey) -> Self {
        Self {
            key,
            first_trading_day: None,
            expiry_day: None,
        }
    }

    pub fn anchor(&self, field: AnchorField) -> Option<Anchor> {
        match field {
            AnchorField::FirstTradingDay => self.first_trading_day,
            AnchorField::ExpiryDay => self.expiry_day,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScheduleTable {
    entries: BTreeMap<MonthKey, MonthSchedule>,
}

impl ScheduleTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts an override entry. Dates must fall within the entry's month.
    pub fn insert_override(
        &mut self,
        key: MonthKey,
        first_trading_day: Option<NaiveDate>,
        expiry_day: Option<NaiveDate>,
    ) -> Result<(), CalendarError> {
        if self.entries.contains_key(&key) {
            return Err(CalendarError::DuplicateKey(key));
        }
        for (field, date) in [
            (AnchorField::FirstTradingDay, first_trading_day),
            (AnchorField::ExpiryDay, expiry_day),
        ] {
            if let Some(date) = date {
                if !key.contains(date) {
                    return Err(CalendarError::OutsideMonth { key, field, date });
                }
            }
        }
        let anchor = |date| Anchor {
            date,
            source: AnchorSource::Override,
        };
        self.entries.insert(
            key,
            MonthSchedule {
                key,
                first_trading_day: first_trading_day.map(anchor),
                expiry_day: expiry_day.map(anchor),
            },
        );
        Ok(())
    }

    pub fn get(&self, key: MonthKey) -> Option<&MonthSchedule> {
        self.entries.get(&key)
    }

    pub fn entries(&self) -> impl Iterator<Item = &MonthSchedule> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// First and last month present.
    pub fn coverage(&self) -> Option<MonthRange> {
        let start = *self.entries.keys().next()?;
        let end = *self.entries.keys().next_back()?;
        Some(MonthRange::new(start, end))
    }

    pub fn anchor(&self, key: MonthKey, field: AnchorField) -> Result<Anchor, CalendarError> {
        self.entries
            .get(&key)
            .and_then(|e| e.anchor(field))
            .ok_or(CalendarError::MissingEntry { key, field })
    }

    /// Concrete purchase date for the installment of month `key`.
    pub fn execution_date(&self, strategy: Strategy, key: MonthKey) -> Result<NaiveDate, CalendarError> {
        match strategy {
            Strategy::Ftd => self.anchor(key, AnchorField::FirstTradingDay),
            Strategy::Exp => self.anchor(key.prev(), AnchorField::ExpiryDay),
        }
        .map(|a| a.date)
    }
}

/// Earliest trading day of the month.
pub fn resolve_first_trading_day(series: &IndexSeries, key: MonthKey) -> Result<NaiveDate, CalendarError> {
    series
        .days_in_month(key)
        .first()
        .map(|d| d.date())
        .ok_or(CalendarError::NoTradingDays(key))
}

/// Last Thursday of the month, stepped backward to the nearest trading day
/// within the month.
pub fn compute_expiry(series: &IndexSeries, key: MonthKey) -> Result<NaiveDate, CalendarError> {
    let first = key.first_day();
    let mut day = key.last_thursday();
    while day >= first {
        if series.contains(day) {
            return Ok(day);
        }
        day -= Duration::days(1);
    }
    Err(CalendarError::NoExpiry(key))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueReason {
    /// Override date has no close in the series. The anchor is dropped.
    NotTradingDay,
    /// Month has no trading days to compute an anchor from.
    NoTradingDays,
    /// No trading day at or before the last Thursday.
    NoExpiry,
    /// Override expiry lies after the month's last Thursday. Kept.
    ExpiryAfterLastThursday,
    /// Expiry precedes the first trading day of the same month. Kept.
    ExpiryBeforeFirstTradingDay,
}

impl fmt::Display for IssueReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IssueReason::NotTradingDay => "override date is not a trading day in the series",
            IssueReason::NoTradingDays => "month has no trading days in the series",
            IssueReason::NoExpiry => "no trading day at or before the last Thursday",
            IssueReason::ExpiryAfterLastThursday => "expiry falls after the last Thursday of the month",
            IssueReason::ExpiryBeforeFirstTradingDay => "expiry precedes the first trading day",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    pub month: MonthKey,
    pub field: AnchorField,
    pub date: Option<NaiveDate>,
    pub reason: IssueReason,
}

/// Output of [`build_schedule`]: the merged table plus everything that did not
/// validate. Rejected override anchors are left out of the table, never
/// replaced by a computed value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleBuild {
    pub table: ScheduleTable,
    pub issues: Vec<ValidationIssue>,
}

impl ScheduleBuild {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Merges overrides with computed anchors over `range`, validating every date
/// against the series.
pub fn build_schedule(series: &IndexSeries, overrides: Option<&ScheduleTable>, range: MonthRange) -> ScheduleBuild {
    let mut table = ScheduleTable::new();
    let mut issues = Vec::new();

    for key in range.iter() {
        let given = overrides.and_then(|o| o.get(key));
        let mut entry = MonthSchedule::empty(key);

        for field in [AnchorField::FirstTradingDay, AnchorField::ExpiryDay] {
            let resolved = match given.and_then(|g| g.anchor(field)) {
                Some(anchor) if series.contains(anchor.date) => Ok(anchor),
                Some(anchor) => Err((Some(anchor.date), IssueReason::NotTradingDay)),
                None => {
                    let computed = match field {
                        AnchorField::FirstTradingDay => resolve_first_trading_day(series, key),
                        AnchorField::ExpiryDay => compute_expiry(series, key),
                    };
                    computed
                        .map(|date| Anchor {
                            date,
                            source: AnchorSource::Computed,
                        })
                        .map_err(|e| match e {
                            CalendarError::NoExpiry(_) if !series.days_in_month(key).is_empty() => {
                                (None, IssueReason::NoExpiry)
                            }
                            _ => (None, IssueReason::NoTradingDays),
                        })
                }
            };
            match resolved {
                Ok(anchor) => match field {
                    AnchorField::FirstTradingDay => entry.first_trading_day = Some(anchor),
                    AnchorField::ExpiryDay => entry.expiry_day = Some(anchor),
                },
                Err((date, reason)) => issues.push(ValidationIssue {
                    month: key,
                    field,
                    date,
                    reason,
                }),
            }
        }

        if let Some(exp) = entry.expiry_day {
            if exp.source == AnchorSource::Override && exp.date > key.last_thursday() {
                issues.push(ValidationIssue {
                    month: key,
                    field: AnchorField::ExpiryDay,
                    date: Some(exp.date),
                    reason: IssueReason::ExpiryAfterLastThursday,
                });
            }
            if let Some(ftd) = entry.first_trading_day {
                if exp.date < ftd.date {
                    issues.push(ValidationIssue {
                        month: key,
                        field: AnchorField::ExpiryDay,
                        date: Some(exp.date),
                        reason: IssueReason::ExpiryBeforeFirstTradingDay,
                    });
                }
            }
        }

        table.entries.insert(key, entry);
    }

    ScheduleBuild { table, issues }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::TradingDay;
    use alloc::vec;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    fn key(y: i32, m: u32) -> MonthKey {
        MonthKey::new(y, m).unwrap()
    }

    fn series_of(dates: &[NaiveDate]) -> IndexSeries {
        IndexSeries::new(dates.iter().map(|&x| TradingDay::new(x, 100.0).unwrap()).collect()).unwrap()
    }

    fn weekdays(from: NaiveDate, to: NaiveDate) -> IndexSeries {
        let dates: Vec<_> = from
            .iter_days()
            .take_while(|x| *x <= to)
            .filter(|x| x.weekday().num_days_from_monday() < 5)
            .collect();
        series_of(&dates)
    }

    #[test]
    fn month_key_arithmetic() {
        assert_eq!(key(2003, 1).prev(), key(2002, 12));
        assert_eq!(key(2002, 12).next(), key(2003, 1));
        assert_eq!(key(2024, 2).last_day(), d(2024, 2, 29));
        assert_eq!(key(2024, 10).last_thursday(), d(2024, 10, 31));
        assert_eq!(key(2012, 10).last_thursday(), d(2012, 10, 25));
        assert!(MonthKey::new(2020, 13).is_err());
        assert!(MonthKey::new(2020, 0).is_err());
        assert_eq!(MonthRange::new(key(2002, 11), key(2003, 2)).iter().count(), 4);
    }

    #[test]
    fn first_trading_day_is_min_date() {
        let s = series_of(&[d(2021, 3, 5), d(2021, 3, 6), d(2021, 3, 7)]);
        assert_eq!(resolve_first_trading_day(&s, key(2021, 3)).unwrap(), d(2021, 3, 5));
        assert_eq!(
            resolve_first_trading_day(&s, key(2021, 4)),
            Err(CalendarError::NoTradingDays(key(2021, 4)))
        );
    }

    #[test]
    fn expiry_on_last_thursday() {
        // October 2024 ends on a Thursday
        let s = weekdays(d(2024, 10, 1), d(2024, 10, 31));
        assert_eq!(compute_expiry(&s, key(2024, 10)).unwrap(), d(2024, 10, 31));
    }

    #[test]
    fn expiry_steps_back_over_holiday() {
        // last Thursday of Nov 2023 is the 30th; drop it, expect Wednesday 29th
        let s = series_of(&[d(2023, 11, 1), d(2023, 11, 28), d(2023, 11, 29), d(2023, 11, 30)]);
        assert_eq!(compute_expiry(&s, key(2023, 11)).unwrap(), d(2023, 11, 30));
        let s = series_of(&[d(2023, 11, 1), d(2023, 11, 28), d(2023, 11, 29), d(2023, 12, 1)]);
        assert_eq!(compute_expiry(&s, key(2023, 11)).unwrap(), d(2023, 11, 29));
        // the Friday after the last Thursday (Oct 26 2023) is never used
        let s = series_of(&[d(2023, 10, 27)]);
        assert_eq!(compute_expiry(&s, key(2023, 10)), Err(CalendarError::NoExpiry(key(2023, 10))));
    }

    #[test]
    fn execution_dates() {
        let mut t = ScheduleTable::new();
        t.insert_override(key(2009, 12), Some(d(2009, 12, 1)), Some(d(2009, 12, 31)))
            .unwrap();
        t.insert_override(key(2010, 1), Some(d(2010, 1, 4)), Some(d(2010, 1, 28)))
            .unwrap();
        assert_eq!(t.execution_date(Strategy::Exp, key(2010, 1)).unwrap(), d(2009, 12, 31));
        assert_eq!(t.execution_date(Strategy::Ftd, key(2010, 1)).unwrap(), d(2010, 1, 4));
        assert_eq!(
            t.execution_date(Strategy::Exp, key(2009, 12)),
            Err(CalendarError::MissingEntry {
                key: key(2009, 11),
                field: AnchorField::ExpiryDay
            })
        );
    }

    #[test]
    fn override_validation() {
        let mut t = ScheduleTable::new();
        assert!(matches!(
            t.insert_override(key(2003, 2), Some(d(2003, 3, 1)), None),
            Err(CalendarError::OutsideMonth { .. })
        ));
        t.insert_override(key(2003, 2), Some(d(2003, 2, 3)), Some(d(2003, 2, 27)))
            .unwrap();
        assert_eq!(
            t.insert_override(key(2003, 2), None, None),
            Err(CalendarError::DuplicateKey(key(2003, 2)))
        );
    }

    #[test]
    fn build_all_computed() {
        let s = weekdays(d(2020, 1, 1), d(2020, 12, 31));
        let b = build_schedule(&s, None, MonthRange::new(key(2020, 1), key(2020, 12)));
        assert!(b.is_clean());
        assert_eq!(b.table.len(), 12);
        for e in b.table.entries() {
            assert_eq!(e.first_trading_day.unwrap().source, AnchorSource::Computed);
            assert_eq!(e.expiry_day.unwrap().source, AnchorSource::Computed);
            assert_eq!(e.expiry_day.unwrap().date.weekday(), Weekday::Thu);
        }
    }

    #[test]
    fn build_flags_override_on_sunday() {
        // 2010-01-03 is a Sunday
        let s = weekdays(d(2009, 12, 1), d(2010, 1, 31));
        let mut o = ScheduleTable::new();
        o.insert_override(key(2010, 1), Some(d(2010, 1, 3)), Some(d(2010, 1, 28)))
            .unwrap();
        let b = build_schedule(&s, Some(&o), MonthRange::new(key(2009, 12), key(2010, 1)));
        assert_eq!(
            b.issues,
            vec![ValidationIssue {
                month: key(2010, 1),
                field: AnchorField::FirstTradingDay,
                date: Some(d(2010, 1, 3)),
                reason: IssueReason::NotTradingDay,
            }]
        );
        // not repaired
        assert_eq!(b.table.get(key(2010, 1)).unwrap().first_trading_day, None);
        assert_eq!(
            b.table.get(key(2010, 1)).unwrap().expiry_day.unwrap().source,
            AnchorSource::Override
        );
    }

    #[test]
    fn build_flags_expiry_after_last_thursday() {
        let s = weekdays(d(2012, 10, 1), d(2012, 10, 31));
        let mut o = ScheduleTable::new();
        o.insert_override(key(2012, 10), Some(d(2012, 10, 1)), Some(d(2012, 10, 29)))
            .unwrap();
        let b = build_schedule(&s, Some(&o), MonthRange::new(key(2012, 10), key(2012, 10)));
        assert_eq!(b.issues.len(), 1);
        assert_eq!(b.issues[0].reason, IssueReason::ExpiryAfterLastThursday);
        assert_eq!(b.table.get(key(2012, 10)).unwrap().expiry_day.unwrap().date, d(2012, 10, 29));
    }

    #[test]
    fn build_reports_uncovered_months() {
        let s = weekdays(d(2020, 1, 1), d(2020, 1, 31));
        let b = build_schedule(&s, None, MonthRange::new(key(2020, 1), key(2020, 2)));
        assert_eq!(b.issues.len(), 2);
        assert!(b.issues.iter().all(|i| i.month == key(2020, 2) && i.reason == IssueReason::NoTradingDays));
    }
}
