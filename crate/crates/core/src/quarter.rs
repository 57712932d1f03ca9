//! Calendar quarters as a single integer index (`year * 4 + quarter - 1`), so
//! that alignment and window arithmetic are exact.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed quarter tag {tag:?}: expected YYYYQn with n in 1-4")]
pub struct QuarterParseError {
    pub tag: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quarter(i64);

impl Quarter {
    /// Returns `None` unless `quarter` is in 1..=4.
    pub fn new(year: i64, quarter: u8) -> Option<Self> {
        if (1..=4).contains(&quarter) {
            Some(Quarter(year * 4 + i64::from(quarter) - 1))
        } else {
            None
        }
    }

    pub fn from_index(index: i64) -> Self {
        Quarter(index)
    }

    pub fn index(self) -> i64 {
        self.0
    }

    pub fn year(self) -> i64 {
        self.0.div_euclid(4)
    }

    /// Quarter within the year, 1 through 4.
    pub fn quarter(self) -> u8 {
        self.0.rem_euclid(4) as u8 + 1
    }

    pub fn offset(self, quarters: i64) -> Self {
        Quarter(self.0 + quarters)
    }

    /// Number of quarters from `earlier` to `self`.
    pub fn since(self, earlier: Quarter) -> i64 {
        self.0 - earlier.0
    }
}

impl fmt::Display for Quarter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}Q{}", self.year(), self.quarter())
    }
}

impl FromStr for Quarter {
    type Err = QuarterParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || QuarterParseError { tag: s.to_string() };
        let bytes = s.as_bytes();
        if bytes.len() != 6 || bytes[4] != b'Q' || !bytes[..4].iter().all(u8::is_ascii_digit) {
            return Err(err());
        }
        let year: i64 = s[..4].parse().map_err(|_| err())?;
        let q = match bytes[5] {
            d @ b'1'..=b'4' => d - b'0',
            _ => return Err(err()),
        };
        Quarter::new(year, q).ok_or_else(err)
    }
}

impl Serialize for Quarter {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let q: Quarter = "1980Q1".parse().unwrap();
        assert_eq!(q.year(), 1980);
        assert_eq!(q.quarter(), 1);
        assert_eq!(q.to_string(), "1980Q1");
        assert_eq!(q.offset(4).to_string(), "1981Q1");
        assert_eq!(q.offset(-1).to_string(), "1979Q4");
    }

    #[test]
    fn sample_length_by_enumeration() {
        let first: Quarter = "1980Q1".parse().unwrap();
        let last: Quarter = "2008Q1".parse().unwrap();
        let mut count = 0;
        let mut q = first;
        while q <= last {
            count += 1;
            q = q.offset(1);
        }
        assert_eq!(count, 113);
        assert_eq!(last.since(first) + 1, 113);
    }

    #[test]
    fn rejects_malformed_tags() {
        for tag in ["1980Q0", "1980Q5", "80Q1", "1980q1", "1980-Q1", "19a0Q1", "", "1980Q12", "+980Q1"] {
            assert!(tag.parse::<Quarter>().is_err(), "{tag}");
        }
    }

    #[test]
    fn ordering_follows_time() {
        let a: Quarter = "1999Q4".parse().unwrap();
        let b: Quarter = "2000Q1".parse().unwrap();
        assert!(a < b);
        assert_eq!(b.since(a), 1);
    }
}
