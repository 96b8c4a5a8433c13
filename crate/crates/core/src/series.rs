//! Daily index closes.

use alloc::vec::Vec;
use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calendar::MonthKey;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("series is empty")]
    Empty,
    #[error("non-positive or non-finite close {close} on {date}")]
    InvalidClose { date: NaiveDate, close: f64 },
    #[error("duplicate date {0}")]
    DuplicateDate(NaiveDate),
    #[error("{date} is not a trading day (nearest preceding trading day: {hint:?})")]
    NotATradingDay {
        date: NaiveDate,
        hint: Option<NaiveDate>,
    },
    #[error("year {0} is not covered through December")]
    YearNotCovered(i32),
    #[error("no trading days in {0}")]
    MonthNotCovered(MonthKey),
}

/// One observation: a calendar date and the index close on that date.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradingDay {
    date: NaiveDate,
    close: f64,
}

impl TradingDay {
    pub fn new(date: NaiveDate, close: f64) -> Result<Self, SeriesError> {
        if !(close.is_finite() && close > 0.0) {
            return Err(SeriesError::InvalidClose { date, close });
        }
        Ok(Self { date, close })
    }

    pub fn date(&self) -> NaiveDate {
        self.date
    }

    pub fn close(&self) -> f64 {
        self.close
    }
}

/// Strictly increasing, non-empty sequence of trading days.
///
/// A date is a trading day iff it appears here; no holiday calendar is
/// inferred.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexSeries {
    days: Vec<TradingDay>,
}

impl IndexSeries {
    /// Builds a series from days in any order. Output is sorted ascending.
    pub fn new(mut days: Vec<TradingDay>) -> Result<Self, SeriesError> {
        if days.is_empty() {
            return Err(SeriesError::Empty);
        }
        days.sort_by_key(|d| d.date);
        if let Some(w) = days.windows(2).find(|w| w[0].date == w[1].date) {
            return Err(SeriesError::DuplicateDate(w[0].date));
        }
        Ok(Self { days })
    }

    pub fn days(&self) -> &[TradingDay] {
        &self.days
    }

    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }

    pub fn first_date(&self) -> NaiveDate {
        self.days[0].date
    }

    pub fn last_date(&self) -> NaiveDate {
        self.days[self.days.len() - 1].date
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.index_of(date).is_ok()
    }

    fn index_of(&self, date: NaiveDate) -> Result<usize, usize> {
        self.days.binary_search_by_key(&date, |d| d.date)
    }

    /// Exact close on `date`. Never interpolates.
    pub fn close_on(&self, date: NaiveDate) -> Result<f64, SeriesError> {
        match self.index_of(date) {
            Ok(i) => Ok(self.days[i].close),
            Err(i) => Err(SeriesError::NotATradingDay {
                date,
                hint: i.checked_sub(1).map(|j| self.days[j].date),
            }),
        }
    }

    /// Trading days falling in `key`'s month, ascending.
    pub fn days_in_month(&self, key: MonthKey) -> &[TradingDay] {
        let start = key.first_day();
        let end = key.last_day();
        let lo = self.days.partition_point(|d| d.date < start);
        let hi = self.days.partition_point(|d| d.date <= end);
        &self.days[lo..hi]
    }

    /// Latest series date within `year`, which must fall in December.
    pub fn last_trading_day_of_year(&self, year: i32) -> Result<NaiveDate, SeriesError> {
        let hi = self.days.partition_point(|d| d.date.year() <= year);
        match hi.checked_sub(1).map(|i| self.days[i].date) {
            Some(d) if d.year() == year && d.month() == 12 => Ok(d),
            _ => Err(SeriesError::YearNotCovered(year)),
        }
    }

    /// Multiplies every close by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self, SeriesError> {
        let days = self
            .days
            .iter()
            .map(|d| TradingDay::new(d.date, d.close * factor))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { days })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    fn two_day() -> IndexSeries {
        IndexSeries::new(vec![
            TradingDay::new(d(2003, 1, 2), 1100.90).unwrap(),
            TradingDay::new(d(2003, 1, 1), 1100.15).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn sorts_ascending() {
        let s = two_day();
        assert_eq!(s.first_date(), d(2003, 1, 1));
        assert_eq!(s.last_date(), d(2003, 1, 2));
    }

    #[test]
    fn close_lookup_and_hint() {
        let s = two_day();
        assert_eq!(s.close_on(d(2003, 1, 2)).unwrap(), 1100.90);
        assert_eq!(
            s.close_on(d(2003, 1, 3)),
            Err(SeriesError::NotATradingDay {
                date: d(2003, 1, 3),
                hint: Some(d(2003, 1, 2))
            })
        );
        assert_eq!(
            s.close_on(d(2002, 12, 31)),
            Err(SeriesError::NotATradingDay {
                date: d(2002, 12, 31),
                hint: None
            })
        );
    }

    #[test]
    fn rejects_bad_close_and_duplicates() {
        assert!(TradingDay::new(d(2003, 1, 1), -5.0).is_err());
        assert!(TradingDay::new(d(2003, 1, 1), 0.0).is_err());
        assert!(TradingDay::new(d(2003, 1, 1), f64::NAN).is_err());
        let day = TradingDay::new(d(2003, 1, 1), 1.0).unwrap();
        assert_eq!(
            IndexSeries::new(vec![day, day]),
            Err(SeriesError::DuplicateDate(d(2003, 1, 1)))
        );
        assert_eq!(IndexSeries::new(vec![]), Err(SeriesError::Empty));
    }

    #[test]
    fn last_day_of_year() {
        let s = IndexSeries::new(vec![
            TradingDay::new(d(2020, 12, 1), 10.0).unwrap(),
            TradingDay::new(d(2020, 12, 28), 11.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(s.last_trading_day_of_year(2020).unwrap(), d(2020, 12, 28));
        assert_eq!(
            s.last_trading_day_of_year(2021),
            Err(SeriesError::YearNotCovered(2021))
        );
        assert_eq!(
            s.last_trading_day_of_year(2019),
            Err(SeriesError::YearNotCovered(2019))
        );
        // a year that stops in November is not covered
        let short = IndexSeries::new(vec![TradingDay::new(d(2020, 11, 30), 1.0).unwrap()]).unwrap();
        assert!(short.last_trading_day_of_year(2020).is_err());
    }

    #[test]
    fn month_slice() {
        let s = IndexSeries::new(vec![
            TradingDay::new(d(2020, 1, 31), 1.0).unwrap(),
            TradingDay::new(d(2020, 2, 5), 1.0).unwrap(),
            TradingDay::new(d(2020, 2, 29), 1.0).unwrap(),
            TradingDay::new(d(2020, 3, 2), 1.0).unwrap(),
        ])
        .unwrap();
        let feb = s.days_in_month(MonthKey::new(2020, 2).unwrap());
        assert_eq!(feb.len(), 2);
        assert_eq!(feb[0].date(), d(2020, 2, 5));
        assert!(s.days_in_month(MonthKey::new(2020, 4).unwrap()).is_empty());
    }
}
