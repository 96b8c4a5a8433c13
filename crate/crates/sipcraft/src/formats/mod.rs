//! Text formats read and written by the tool.

pub mod overrides;
pub mod series_csv;

pub use overrides::{load_schedule_overrides, write_schedule_overrides, PUBLISHED_OVERRIDES};
pub use series_csv::{parse_series, write_series};
