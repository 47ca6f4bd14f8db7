//! Citing year and cited-year windows.

use std::fmt;

use crate::error::{Error, Result};

pub const DEFAULT_INDICATOR_YEARS: u32 = 3;
pub const DEFAULT_FIELD_YEARS: u32 = 10;

/// Inclusive, non-empty range of publication years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct YearRange {
    first: i32,
    last: i32,
}

impl YearRange {
    pub fn new(first: i32, last: i32) -> Result<Self> {
        if first > last {
            return Err(Error::InvalidWindow(format!("{first}-{last} is empty")));
        }
        Ok(YearRange { first, last })
    }

    /// The `years` calendar years immediately before `year`.
    pub fn preceding(year: i32, years: u32) -> Result<Self> {
        if years == 0 {
            return Err(Error::InvalidWindow(
                "window length must be at least 1".into(),
            ));
        }
        YearRange::new(year - years as i32, year - 1)
    }

    pub fn first(&self) -> i32 {
        self.first
    }

    pub fn last(&self) -> i32 {
        self.last
    }

    pub fn len(&self) -> u32 {
        (self.last - self.first + 1) as u32
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn contains(&self, year: i32) -> bool {
        self.first <= year && year <= self.last
    }

    pub fn years(&self) -> impl Iterator<Item = i32> {
        self.first..=self.last
    }

    pub fn shifted(&self, by: i32) -> YearRange {
        YearRange {
            first: self.first + by,
            last: self.last + by,
        }
    }
}

impl fmt::Display for YearRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.first, self.last)
    }
}

/// The fixed citing year plus the cited-year windows used for the
/// impact indicators and for subject-field delimitation. Both windows end
/// the year before the citing year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WindowConfig {
    citing_year: i32,
    indicator_window: YearRange,
    field_window: YearRange,
}

impl WindowConfig {
    /// Default windows: 3 cited years for indicators, 10 for field delimitation.
    pub fn new(citing_year: i32) -> Self {
        Self::with_lengths(citing_year, DEFAULT_INDICATOR_YEARS, DEFAULT_FIELD_YEARS)
            .expect("default window lengths are positive")
    }

    pub fn with_lengths(citing_year: i32, indicator_years: u32, field_years: u32) -> Result<Self> {
        Self::with_windows(
            citing_year,
            YearRange::preceding(citing_year, indicator_years)?,
            YearRange::preceding(citing_year, field_years)?,
        )
    }

    pub fn with_windows(
        citing_year: i32,
        indicator_window: YearRange,
        field_window: YearRange,
    ) -> Result<Self> {
        for (name, w) in [("indicator", indicator_window), ("field", field_window)] {
            if w.last() != citing_year - 1 {
                return Err(Error::InvalidWindow(format!(
                    "{name} window {w} must end in {}",
                    citing_year - 1
                )));
            }
        }
        Ok(WindowConfig {
            citing_year,
            indicator_window,
            field_window,
        })
    }

    pub fn citing_year(&self) -> i32 {
        self.citing_year
    }

    pub fn indicator_window(&self) -> YearRange {
        self.indicator_window
    }

    pub fn field_window(&self) -> YearRange {
        self.field_window
    }
}

impl fmt::Display for WindowConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "citing_year={} indicator_window={} field_window={}",
            self.citing_year, self.indicator_window, self.field_window
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_three_and_ten_year_windows() {
        let c = WindowConfig::new(2007);
        assert_eq!(c.indicator_window(), YearRange::new(2004, 2006).unwrap());
        assert_eq!(c.field_window(), YearRange::new(1997, 2006).unwrap());
        assert_eq!(c.field_window().len(), 10);
    }

    #[test]
    fn windows_must_end_before_citing_year() {
        let bad = YearRange::new(2004, 2007).unwrap();
        let ok = YearRange::new(1997, 2006).unwrap();
        assert!(WindowConfig::with_windows(2007, bad, ok).is_err());
        assert!(WindowConfig::with_windows(2007, ok, bad).is_err());
        // indicator window may equal the field window
        let three = YearRange::new(2004, 2006).unwrap();
        assert!(WindowConfig::with_windows(2007, three, three).is_ok());
    }

    #[test]
    fn empty_windows_rejected() {
        assert!(YearRange::new(2006, 2005).is_err());
        assert!(WindowConfig::with_lengths(2007, 0, 10).is_err());
    }

    #[test]
    fn range_membership() {
        let r = YearRange::new(2004, 2006).unwrap();
        assert!(!r.contains(2003));
        assert!(r.contains(2004) && r.contains(2006));
        assert!(!r.contains(2007));
        assert_eq!(r.years().collect::<Vec<_>>(), vec![2004, 2005, 2006]);
        assert_eq!(r.shifted(-1).to_string(), "2003-2005");
    }
}
