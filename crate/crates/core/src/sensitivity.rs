//! Effect of alternative window configurations on RIP and SNIP.

use std::fmt;

use crate::corpus::Corpus;
use crate::error::Result;
use crate::index::CitationIndex;
use crate::indicators::{IndicatorEngine, IndicatorReport, JournalIndicators};
use crate::stats::percentile_of_sorted;
use crate::window::{WindowConfig, YearRange};

/// Papers per year, in every year of the default indicator window, for a
/// journal to count as big.
pub const BIG_JOURNAL_PAPERS_PER_YEAR: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantSpec {
    /// Field window set equal to the indicator window.
    FieldWindowShort,
    /// Indicator window reduced to the two years before the citing year.
    IndicatorWindowShort,
    /// Citing year moved back one year, both windows shifted with it.
    ShiftCitingYear,
    Custom(WindowConfig),
}

impl VariantSpec {
    pub fn apply(&self, default: &WindowConfig) -> Result<WindowConfig> {
        let y = default.citing_year();
        match *self {
            VariantSpec::FieldWindowShort => WindowConfig::with_windows(
                y,
                default.indicator_window(),
                default.indicator_window(),
            ),
            VariantSpec::IndicatorWindowShort => {
                WindowConfig::with_windows(y, YearRange::preceding(y, 2)?, default.field_window())
            }
            VariantSpec::ShiftCitingYear => WindowConfig::with_windows(
                y - 1,
                default.indicator_window().shifted(-1),
                default.field_window().shifted(-1),
            ),
            VariantSpec::Custom(c) => Ok(c),
        }
    }
}

impl fmt::Display for VariantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariantSpec::FieldWindowShort => f.write_str("field-window-short"),
            VariantSpec::IndicatorWindowShort => f.write_str("indicator-window-short"),
            VariantSpec::ShiftCitingYear => f.write_str("shift-citing-year"),
            VariantSpec::Custom(c) => write!(f, "custom({c})"),
        }
    }
}

/// `|100 (v - d) / ((v + d) / 2)|`, with `diff(0, 0) = 0`. `None` when either
/// value is missing or the mean is zero for non-zero inputs.
pub fn diff(v_default: Option<f64>, v_variant: Option<f64>) -> Option<f64> {
    let (d, v) = (v_default?, v_variant?);
    if d == 0.0 && v == 0.0 {
        return Some(0.0);
    }
    let mean = (v + d) / 2.0;
    (mean != 0.0).then(|| (100.0 * (v - d) / mean).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Paired {
    pub default: Option<f64>,
    pub variant: Option<f64>,
    pub diff: Option<f64>,
}

impl Paired {
    fn new(default: Option<f64>, variant: Option<f64>) -> Self {
        Paired {
            default,
            variant,
            diff: diff(default, variant),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JournalSensitivity {
    pub source_id: String,
    pub big: bool,
    pub rip: Paired,
    pub snip: Paired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stratum {
    All,
    Big,
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stratum::All => "all",
            Stratum::Big => "big",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Rip,
    Snip,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Rip => "rip",
            Measure::Snip => "snip",
        })
    }
}

/// Mean and median DIFF over journals with a defined DIFF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffAggregate {
    pub measure: Measure,
    pub stratum: Stratum,
    pub n: usize,
    pub mean: Option<f64>,
    pub median: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub default_config: WindowConfig,
    pub variant_config: WindowConfig,
    pub per_journal: Vec<JournalSensitivity>,
    /// rip/all, rip/big, snip/all, snip/big.
    pub aggregates: Vec<DiffAggregate>,
}

impl SensitivityReport {
    pub fn aggregate(&self, measure: Measure, stratum: Stratum) -> &DiffAggregate {
        self.aggregates
            .iter()
            .find(|a| a.measure == measure && a.stratum == stratum)
            .expect("all four aggregates are present")
    }
}

pub fn aggregate_diffs(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
    (Some(mean), Some(percentile_of_sorted(&sorted, 50.0)))
}

fn is_big(index: &CitationIndex, source_id: &str, config: &WindowConfig, threshold: usize) -> bool {
    index.source_key(source_id).is_some_and(|s| {
        config
            .indicator_window()
            .years()
            .all(|y| index.count_papers_of_source(s, y) >= threshold)
    })
}

/// Pairs two indicator reports by source id. Journals present in only one
/// report are dropped.
pub fn assemble(
    default_config: WindowConfig,
    variant_config: WindowConfig,
    default: &IndicatorReport,
    variant: &IndicatorReport,
    is_big: impl Fn(&str) -> bool,
) -> SensitivityReport {
    let per_journal: Vec<JournalSensitivity> = default
        .journals
        .iter()
        .filter_map(|d| {
            let v: &JournalIndicators = variant.journal(&d.source_id)?;
            Some(JournalSensitivity {
                source_id: d.source_id.clone(),
                big: is_big(&d.source_id),
                rip: Paired::new(d.rip, v.rip),
                snip: Paired::new(d.snip, v.snip),
            })
        })
        .collect();

    let mut aggregates = Vec::with_capacity(4);
    for measure in [Measure::Rip, Measure::Snip] {
        for stratum in [Stratum::All, Stratum::Big] {
            let diffs: Vec<f64> = per_journal
                .iter()
                .filter(|j| stratum == Stratum::All || j.big)
                .filter_map(|j| match measure {
                    Measure::Rip => j.rip.diff,
                    Measure::Snip => j.snip.diff,
                })
                .collect();
            let (mean, median) = aggregate_diffs(&diffs);
            aggregates.push(DiffAggregate {
                measure,
                stratum,
                n: diffs.len(),
                mean,
                median,
            });
        }
    }
    SensitivityReport {
        default_config,
        variant_config,
        per_journal,
        aggregates,
    }
}

pub fn run_sensitivity(
    corpus: &Corpus,
    default_config: &WindowConfig,
    variant: VariantSpec,
) -> Result<SensitivityReport> {
    run_sensitivity_with(corpus, default_config, variant, BIG_JOURNAL_PAPERS_PER_YEAR)
}

pub fn run_sensitivity_with(
    corpus: &Corpus,
    default_config: &WindowConfig,
    variant: VariantSpec,
    big_threshold: usize,
) -> Result<SensitivityReport> {
    let variant_config = variant.apply(default_config)?;
    let engine = IndicatorEngine::new(corpus);
    let (d, v) = rayon::join(
        || engine.compute(default_config),
        || engine.compute(&variant_config),
    );
    let (d, v): (IndicatorReport, IndicatorReport) = (d?, v?);
    let index = engine.index();
    Ok(assemble(*default_config, variant_config, &d, &v, |id| {
        is_big(index, id, default_config, big_threshold)
    }))
}
