//! Per-journal impact indicators with citing-side (source) normalization.
//!
//! For a journal `j`, citing year `Y` and the configured windows:
//!
//! * `A` = papers of `j` in the indicator window, `C` = citations given in
//!   `Y` to those papers, `RIP = C / A`.
//! * The subject field is every paper published in `Y` citing at least one
//!   paper of `j` from the field window; `m` is its size.
//! * `R` is the mean number of indicator-window references per field paper,
//!   `R_db` the mean number of those that resolve to papers in the database,
//!   and `f = R_db / R` the database coverage.
//! * `M_db` is the median `R_db` over journals with a non-empty field,
//!   `RDCP = R_db / M_db` and `SNIP = RIP / RDCP`.
//!
//! Undefined quantities are `None`, never zero.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::index::{CitationIndex, PaperKey, SourceKey};
use crate::window::WindowConfig;

/// Papers of the citing year that cite a journal within the field window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubjectField {
    pub source_id: String,
    pub citing_papers: Vec<PaperKey>,
}

impl SubjectField {
    pub fn m(&self) -> usize {
        self.citing_papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.citing_papers.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JournalIndicators {
    pub source_id: String,
    /// A: papers in the indicator window.
    pub n_papers: u64,
    pub pct_reviews: Option<f64>,
    /// C: citations from the citing year to those papers.
    pub cites: u64,
    pub rip: Option<f64>,
    /// Subject field size.
    pub m: u64,
    /// Citation potential.
    pub r: Option<f64>,
    /// Database coverage of the field's windowed references, in [0, 1].
    pub f: Option<f64>,
    /// Database citation potential.
    pub r_db: Option<f64>,
    pub rdcp: Option<f64>,
    pub snip: Option<f64>,
    pub pct_self_cites: Option<f64>,
    pub pct_field_refs_to_journal: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatabaseSummary {
    /// Journals entering the median.
    pub n_eligible: usize,
    pub median_dcp: f64,
}

/// Every journal of the registry, sorted by source id, plus the
/// database-wide normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorReport {
    pub journals: Vec<JournalIndicators>,
    pub summary: DatabaseSummary,
}

impl IndicatorReport {
    pub fn journal(&self, source_id: &str) -> Option<&JournalIndicators> {
        self.journals
            .binary_search_by(|j| j.source_id.as_str().cmp(source_id))
            .ok()
            .map(|i| &self.journals[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatabasePotential {
    pub r_db: f64,
    /// `None` when the field holds no windowed references.
    pub f: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn percent(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| 100.0 * num as f64 / den as f64)
}

/// `C / A` for the indicator window.
pub fn raw_impact_per_paper(
    index: &CitationIndex,
    source_id: &str,
    config: &WindowConfig,
) -> Result<f64> {
    let papers = index.papers_of_journal(source_id, config.indicator_window());
    let cites = index.citations_to(papers.iter().copied(), config.citing_year());
    ratio(cites, papers.len() as u64).ok_or(Error::Undefined("rip"))
}

pub fn delimit_subject_field(
    index: &CitationIndex,
    source_id: &str,
    config: &WindowConfig,
) -> SubjectField {
    let citing_papers = match index.source_key(source_id) {
        Some(s) => field_members(index, s, config),
        None => Vec::new(),
    };
    SubjectField {
        source_id: source_id.to_string(),
        citing_papers,
    }
}

fn field_members(index: &CitationIndex, source: SourceKey, config: &WindowConfig) -> Vec<PaperKey> {
    let y = config.citing_year();
    let members: BTreeSet<PaperKey> = index
        .papers_of_source(source, config.field_window())
        .into_iter()
        .flat_map(|p| index.citers_of(p))
        .map(|c| c.citer)
        .filter(|&c| index.year_of(c) == y)
        .collect();
    members.into_iter().collect()
}

#[derive(Debug, Default, Clone, Copy)]
struct FieldTotals {
    total: u64,
    in_database: u64,
    to_journal: u64,
}

fn field_totals(index: &CitationIndex, field: &SubjectField, config: &WindowConfig) -> FieldTotals {
    let source = index.source_key(&field.source_id);
    field
        .citing_papers
        .iter()
        .map(|&p| index.windowed_refs(p, config.indicator_window(), source))
        .fold(FieldTotals::default(), |acc, w| FieldTotals {
            total: acc.total + w.total,
            in_database: acc.in_database + w.in_database,
            to_journal: acc.to_journal + w.to_source,
        })
}

/// Mean number of indicator-window references per field paper.
pub fn citation_potential(
    index: &CitationIndex,
    field: &SubjectField,
    config: &WindowConfig,
) -> Result<f64> {
    let t = field_totals(index, field, config);
    ratio(t.total, field.m() as u64).ok_or(Error::Undefined("r"))
}

pub fn database_citation_potential(
    index: &CitationIndex,
    field: &SubjectField,
    config: &WindowConfig,
) -> Result<DatabasePotential> {
    let t = field_totals(index, field, config);
    let r_db = ratio(t.in_database, field.m() as u64).ok_or(Error::Undefined("r_db"))?;
    Ok(DatabasePotential {
        r_db,
        f: ratio(t.in_database, t.total),
    })
}

/// Median with the even-count case averaged.
pub fn median_dcp(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::NoEligibleJournals);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    Ok(if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    })
}

pub fn relative_dcp(r_db: f64, median: f64) -> Result<f64> {
    if median.is_nan() || median <= 0.0 {
        return Err(Error::NonPositiveMedian(median));
    }
    Ok(r_db / median)
}

/// `rip / rdcp`; undefined for a non-positive `rdcp`.
pub fn snip(rip: f64, rdcp: f64) -> Option<f64> {
    (rdcp > 0.0).then(|| rip / rdcp)
}

pub fn self_citation_pct(
    index: &CitationIndex,
    source_id: &str,
    config: &WindowConfig,
) -> Result<f64> {
    let Some(source) = index.source_key(source_id) else {
        return Err(Error::Undefined("pct_self_cites"));
    };
    let (cites, own) = incoming(index, source, config);
    percent(own, cites).ok_or(Error::Undefined("pct_self_cites"))
}

pub fn subfield_refs_to_journal_pct(
    index: &CitationIndex,
    field: &SubjectField,
    config: &WindowConfig,
) -> Result<f64> {
    let t = field_totals(index, field, config);
    percent(t.to_journal, t.total).ok_or(Error::Undefined("pct_field_refs_to_journal"))
}

/// (all citations, citations from the journal's own papers) received in the
/// citing year by the journal's indicator-window papers.
fn incoming(index: &CitationIndex, source: SourceKey, config: &WindowConfig) -> (u64, u64) {
    let y = config.citing_year();
    let mut cites = 0;
    let mut own = 0;
    for p in index.papers_of_source(source, config.indicator_window()) {
        for c in index.citers_of(p) {
            if index.year_of(c.citer) == y {
                cites += c.multiplicity as u64;
                if index.source_of(c.citer) == source {
                    own += c.multiplicity as u64;
                }
            }
        }
    }
    (cites, own)
}

/// Everything except the median-dependent fields.
fn measure(
    index: &CitationIndex,
    source: SourceKey,
    source_id: &str,
    config: &WindowConfig,
) -> JournalIndicators {
    let papers = index.papers_of_source(source, config.indicator_window());
    let n_papers = papers.len() as u64;
    let reviews = papers.iter().filter(|&&p| index.is_review(p)).count() as u64;
    let (cites, own) = incoming(index, source, config);

    let field = SubjectField {
        source_id: source_id.to_string(),
        citing_papers: field_members(index, source, config),
    };
    let m = field.m() as u64;
    let t = field_totals(index, &field, config);

    JournalIndicators {
        source_id: source_id.to_string(),
        n_papers,
        pct_reviews: percent(reviews, n_papers),
        cites,
        rip: ratio(cites, n_papers),
        m,
        r: ratio(t.total, m),
        f: if m > 0 {
            ratio(t.in_database, t.total)
        } else {
            None
        },
        r_db: ratio(t.in_database, m),
        rdcp: None,
        snip: None,
        pct_self_cites: percent(own, cites),
        pct_field_refs_to_journal: percent(t.to_journal, t.total),
    }
}

/// Holds the index of an erased corpus so several window configurations can
/// be evaluated against it.
#[derive(Debug, Clone)]
pub struct IndicatorEngine {
    index: CitationIndex,
}

impl IndicatorEngine {
    pub fn new(corpus: &Corpus) -> Self {
        IndicatorEngine {
            index: CitationIndex::build(&corpus.clone().erase_non_papers()),
        }
    }

    pub fn from_index(index: CitationIndex) -> Self {
        IndicatorEngine { index }
    }

    pub fn index(&self) -> &CitationIndex {
        &self.index
    }

    pub fn compute(&self, config: &WindowConfig) -> Result<IndicatorReport> {
        let index = &self.index;
        let sources: Vec<(SourceKey, &str)> = index.sources().collect();
        let mut journals: Vec<JournalIndicators> = sources
            .par_iter()
            .map(|&(s, id)| measure(index, s, id, config))
            .collect();

        let dcps: Vec<f64> = journals.iter().filter_map(|j| j.r_db).collect();
        let median = median_dcp(&dcps)?;
        for j in &mut journals {
            j.rdcp = j.r_db.and_then(|r| relative_dcp(r, median).ok());
            j.snip = match (j.rip, j.rdcp) {
                (Some(rip), Some(rdcp)) => snip(rip, rdcp),
                _ => None,
            };
        }
        Ok(IndicatorReport {
            journals,
            summary: DatabaseSummary {
                n_eligible: dcps.len(),
                median_dcp: median,
            },
        })
    }
}

/// Erases non-papers, indexes the corpus and evaluates every registered
/// journal.
pub fn compute_all(corpus: &Corpus, config: &WindowConfig) -> Result<IndicatorReport> {
    IndicatorEngine::new(corpus).compute(config)
}
