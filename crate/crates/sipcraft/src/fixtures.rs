//! Synthetic data for tests and demonstrations.

use chrono::{Datelike, NaiveDate, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use sipcraft_core::{IndexSeries, ScheduleTable, SeriesError, TradingDay};

use crate::error::ParseError;
use crate::formats::{load_schedule_overrides, PUBLISHED_OVERRIDES};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Flat { level: f64 },
    /// Geometric random walk with daily log-return drift and volatility.
    Walk { start: f64, drift: f64, volatility: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub shape: Shape,
    /// Share of weekdays dropped as holidays.
    pub holiday_rate: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            start: NaiveDate::from_ymd_opt(2002, 12, 1).unwrap(),
            end: NaiveDate::from_ymd_opt(2024, 12, 31).unwrap(),
            shape: Shape::Walk {
                start: 1000.0,
                drift: 0.0004,
                volatility: 0.012,
            },
            holiday_rate: 0.0,
            seed: 42,
        }
    }
}

/// Weekday series over `[start, end]`, closes rounded to two decimals.
/// The last weekday of every month is never dropped, so each month keeps at
/// least one trading day.
pub fn synthetic_series(spec: &SyntheticSpec) -> Result<IndexSeries, SeriesError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = match spec.shape {
        Shape::Walk { volatility, .. } => Some(Normal::new(0.0, volatility).map_err(|_| SeriesError::InvalidClose {
            date: spec.start,
            close: volatility,
        })?),
        Shape::Flat { .. } => None,
    };
    let mut level = match spec.shape {
        Shape::Flat { level } => level,
        Shape::Walk { start, .. } => start,
    };
    let mut days = Vec::new();
    let mut date = spec.start;
    while date <= spec.end {
        let weekday = !matches!(date.weekday(), Weekday::Sat | Weekday::Sun);
        if weekday {
            if let (Shape::Walk { drift, .. }, Some(n)) = (spec.shape, noise) {
                level *= (drift + n.sample(&mut rng)).exp();
            }
            let month_end = last_weekday_of_month(date) == date;
            let holiday = !month_end && spec.holiday_rate > 0.0 && rng.random::<f64>() < spec.holiday_rate;
            if !holiday {
                let close = ((level * 100.0).round() / 100.0).max(0.01);
                days.push(TradingDay::new(date, close)?);
            }
        }
        date = date.succ_opt().expect("date in range");
    }
    IndexSeries::new(days)
}

fn last_weekday_of_month(date: NaiveDate) -> NaiveDate {
    let mut d = sipcraft_core::MonthKey::of(date).last_day();
    while matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
        d = d.pred_opt().expect("date in range");
    }
    d
}

/// The bundled historical schedule, December 2002 to December 2024.
pub fn published_overrides() -> Result<ScheduleTable, ParseError> {
    load_schedule_overrides(PUBLISHED_OVERRIDES)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sipcraft_core::calendar::{build_schedule, MonthKey, MonthRange};

    #[test]
    fn flat_series_is_constant_and_weekday_only() {
        let s = synthetic_series(&SyntheticSpec {
            shape: Shape::Flat { level: 100.0 },
            ..Default::default()
        })
        .unwrap();
        assert!(s.days().iter().all(|d| d.close() == 100.0));
        assert!(s.days().iter().all(|d| d.date().weekday().num_days_from_monday() < 5));
    }

    #[test]
    fn walk_is_deterministic_and_schedules_cleanly() {
        let spec = SyntheticSpec {
            holiday_rate: 0.05,
            ..Default::default()
        };
        let a = synthetic_series(&spec).unwrap();
        assert_eq!(a, synthetic_series(&spec).unwrap());
        let range = MonthRange::new(MonthKey::new(2002, 12).unwrap(), MonthKey::new(2024, 12).unwrap());
        assert!(build_schedule(&a, None, range).is_clean());
    }

    #[test]
    fn bundled_overrides_load() {
        assert_eq!(published_overrides().unwrap().len(), 265);
    }
}
