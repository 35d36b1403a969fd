//! Point-based time: a totally ordered set of calendar days with one
//! distinguished point, `now`.
//!
//! Every predicate below is written in terms of [`leq`] alone, so swapping the
//! point domain only requires a new ordering.

use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A single day of the Gregorian calendar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimePoint(NaiveDate);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid date `{input}`: expected DD.MM.YYYY")]
pub struct DateParseError {
    pub input: String,
}

impl TimePoint {
    /// Returns `None` for dates that do not exist in the calendar.
    pub fn from_ymd(year: i32, month: u32, day: u32) -> Option<Self> {
        NaiveDate::from_ymd_opt(year, month, day).map(TimePoint)
    }

    pub fn year(&self) -> i32 {
        self.0.year()
    }

    pub fn month(&self) -> u32 {
        self.0.month()
    }

    pub fn day(&self) -> u32 {
        self.0.day()
    }

    pub fn today() -> Self {
        TimePoint(chrono::Local::now().date_naive())
    }
}

impl FromStr for TimePoint {
    type Err = DateParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DateParseError {
            input: s.to_string(),
        };
        let b = s.as_bytes();
        // chrono is lenient about padding, the literal format is not
        if b.len() != 10 || b[2] != b'.' || b[5] != b'.' {
            return Err(err());
        }
        if !b
            .iter()
            .enumerate()
            .all(|(i, c)| i == 2 || i == 5 || c.is_ascii_digit())
        {
            return Err(err());
        }
        let day = s[0..2].parse().map_err(|_| err())?;
        let month = s[3..5].parse().map_err(|_| err())?;
        let year = s[6..10].parse().map_err(|_| err())?;
        TimePoint::from_ymd(year, month, day).ok_or_else(err)
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:02}.{:02}.{:04}",
            self.day(),
            self.month(),
            self.year()
        )
    }
}

impl Serialize for TimePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TimePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The base ordering relation.
pub fn leq(x: TimePoint, y: TimePoint) -> bool {
    x <= y
}

pub fn before(x: TimePoint, y: TimePoint) -> bool {
    leq(x, y) && !leq(y, x)
}

pub fn after(x: TimePoint, y: TimePoint) -> bool {
    before(y, x)
}

/// Inclusive containment in `[start, finish]`. An inverted interval contains nothing.
pub fn during(x: TimePoint, start: TimePoint, finish: TimePoint) -> bool {
    leq(start, x) && leq(x, finish)
}

/// The time structure: every representable day plus the present moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Timeline {
    pub now: TimePoint,
}

impl Timeline {
    pub fn new(now: TimePoint) -> Self {
        Timeline { now }
    }

    /// A timeline whose present is the host's current date.
    pub fn system() -> Self {
        Timeline::new(TimePoint::today())
    }

    pub fn past(&self, x: TimePoint) -> bool {
        before(x, self.now)
    }

    pub fn future(&self, x: TimePoint) -> bool {
        after(x, self.now)
    }
}
