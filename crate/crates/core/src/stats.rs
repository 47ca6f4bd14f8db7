//! Distribution summaries and unit-width histograms of indicator values.

use crate::error::{Error, Result};

pub const PERCENTILE_RANKS: [u32; 5] = [25, 50, 75, 90, 99];

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSummary {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (divisor `n - 1`); 0 for a single value.
    pub std: f64,
    /// `m3 / m2^1.5` from population central moments; 0 when `m2 = 0`.
    pub skewness: f64,
    /// Values at [`PERCENTILE_RANKS`], in the same order.
    pub percentiles: [f64; 5],
}

impl DistributionSummary {
    pub fn percentile(&self, rank: u32) -> Option<f64> {
        PERCENTILE_RANKS
            .iter()
            .position(|&r| r == rank)
            .map(|i| self.percentiles[i])
    }

    pub fn median(&self) -> f64 {
        self.percentiles[1]
    }
}

/// Linear interpolation at 1-based rank `1 + (p/100)(n-1)` over sorted data.
pub fn percentile_of_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = (p / 100.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

pub fn distribution_summary(values: &[f64]) -> Result<DistributionSummary> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidValue(bad));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let nf = n as f64;
    let mean = sorted.iter().sum::<f64>() / nf;
    let (m2, m3) = sorted.iter().fold((0.0, 0.0), |(s2, s3), v| {
        let d = v - mean;
        (s2 + d * d, s3 + d * d * d)
    });
    let std = if n > 1 { (m2 / (nf - 1.0)).sqrt() } else { 0.0 };
    let (m2, m3) = (m2 / nf, m3 / nf);
    let skewness = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
    let percentiles = PERCENTILE_RANKS.map(|p| percentile_of_sorted(&sorted, p as f64));
    Ok(DistributionSummary {
        n,
        mean,
        std,
        skewness,
        percentiles,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramBin {
    /// Values in `[lower, lower + 1)`.
    pub lower: u64,
    pub count: usize,
    pub percent: f64,
}

impl HistogramBin {
    pub fn midpoint(&self) -> f64 {
        self.lower as f64 + 0.5
    }
}

/// Unit bins from 0 up to the bin of the largest value, empty bins included.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bins: Vec<HistogramBin>,
}

impl Histogram {
    pub fn percent_at(&self, midpoint: f64) -> f64 {
        self.bins
            .iter()
            .find(|b| b.midpoint() == midpoint)
            .map_or(0.0, |b| b.percent)
    }
}

const MAX_HISTOGRAM_BIN: u64 = 1_000_000;

pub fn histogram(values: &[f64]) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(&bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidValue(bad));
    }
    let top = values.iter().map(|v| v.floor() as u64).max().unwrap_or(0);
    if top > MAX_HISTOGRAM_BIN {
        return Err(Error::InvalidValue(top as f64));
    }
    let mut counts = vec![0usize; top as usize + 1];
    for v in values {
        counts[v.floor() as usize] += 1;
    }
    let n = values.len() as f64;
    Ok(Histogram {
        bins: counts
            .into_iter()
            .enumerate()
            .map(|(k, count)| HistogramBin {
                lower: k as u64,
                count,
                percent: 100.0 * count as f64 / n,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_data() {
        let s = distribution_summary(&[3.5, 3.5, 3.5]).unwrap();
        assert_eq!(s.mean, 3.5);
        assert_eq!(s.std, 0.0);
        assert_eq!(s.skewness, 0.0);
        assert!(s.percentiles.iter().all(|&p| p == 3.5));
    }

    #[test]
    fn small_skewed_sample() {
        // hand computation: mean 4, deviations -3,-2,-1,6
        // m2 = 50/4, m3 = (-27-8-1+216)/4 = 45, sample var = 50/3
        let s = distribution_summary(&[10.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(s.mean, 4.0);
        assert_eq!(s.median(), 2.5);
        assert!((s.std - (50.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((s.skewness - 45.0 / 12.5f64.powf(1.5)).abs() < 1e-12);
        assert!(s.skewness > 0.0);
        // P25 at rank 1.75 -> 1.75; P99 at rank 3.97 -> 3 + 0.97*7
        assert!((s.percentile(25).unwrap() - 1.75).abs() < 1e-12);
        assert!((s.percentile(99).unwrap() - 9.79).abs() < 1e-12);
    }

    #[test]
    fn single_value() {
        let s = distribution_summary(&[2.0]).unwrap();
        assert_eq!((s.n, s.mean, s.std, s.skewness), (1, 2.0, 0.0, 0.0));
    }

    #[test]
    fn empty_and_non_finite_rejected() {
        assert_eq!(distribution_summary(&[]), Err(Error::EmptyInput));
        assert!(distribution_summary(&[1.0, f64::NAN]).is_err());
        assert_eq!(histogram(&[]), Err(Error::EmptyInput));
        assert!(histogram(&[1.0, -0.5]).is_err());
        assert!(histogram(&[f64::INFINITY]).is_err());
    }

    #[test]
    fn histogram_bins_are_left_closed() {
        let h = histogram(&[2.0, 2.9]).unwrap();
        assert_eq!(h.percent_at(2.5), 100.0);
        assert_eq!(h.percent_at(1.5), 0.0);
        let h = histogram(&[1.0, 0.999]).unwrap();
        assert_eq!(h.percent_at(0.5), 50.0);
        assert_eq!(h.percent_at(1.5), 50.0);
    }

    #[test]
    fn histogram_uniform_grid() {
        let values: Vec<f64> = (0..10).map(|k| k as f64 + 0.5).collect();
        let h = histogram(&values).unwrap();
        assert_eq!(h.bins.len(), 10);
        for b in &h.bins {
            assert!((b.percent - 10.0).abs() < 1e-12);
        }
    }

    #[test]
    fn adding_median_value_keeps_median() {
        let mut v = vec![1.0, 4.0, 9.0];
        let p50 = distribution_summary(&v).unwrap().median();
        v.push(p50);
        assert_eq!(distribution_summary(&v).unwrap().median(), p50);
    }

    proptest! {
        #[test]
        fn permutation_invariant(mut v in prop::collection::vec(0.0f64..100.0, 1..40), seed in any::<u64>()) {
            let a = distribution_summary(&v).unwrap();
            // deterministic shuffle
            let n = v.len();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                v.swap(i, (s >> 33) as usize % (i + 1));
            }
            let b = distribution_summary(&v).unwrap();
            prop_assert_eq!(a.n, b.n);
            prop_assert_eq!(a.percentiles, b.percentiles);
            prop_assert!((a.mean - b.mean).abs() < 1e-9);
            prop_assert!((a.std - b.std).abs() < 1e-9);
        }

        #[test]
        fn percentiles_non_decreasing(v in prop::collection::vec(-50.0f64..50.0, 1..60)) {
            let s = distribution_summary(&v).unwrap();
            prop_assert!(s.percentiles.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn histogram_sums_to_hundred(v in prop::collection::vec(0.0f64..30.0, 1..80)) {
            let h = histogram(&v).unwrap();
            let total: f64 = h.bins.iter().map(|b| b.percent).sum();
            prop_assert!((total - 100.0).abs() < 1e-9);
            prop_assert_eq!(h.bins.iter().map(|b| b.count).sum::<usize>(), v.len());
        }
    }
}
