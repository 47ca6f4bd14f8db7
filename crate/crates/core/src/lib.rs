//! Source-normalized impact per paper (SNIP) and companion journal
//! indicators over a citation corpus.
//!
//! Typical flow: [`parse_corpus`] → [`compute_all`] → [`report`].

pub mod corpus;
pub mod error;
pub mod index;
pub mod indicators;
pub mod report;
pub mod sensitivity;
pub mod stats;
pub mod synth;
pub mod window;

pub use corpus::{
    parse_corpus, parse_corpus_with, parse_registry, Corpus, CorpusOptions, DocType, PaperRecord,
    ReferenceRecord,
};
pub use error::{Error, Result};
pub use index::{CitationIndex, PaperKey, SourceKey};
pub use indicators::{
    citation_potential, compute_all, database_citation_potential, delimit_subject_field,
    median_dcp, raw_impact_per_paper, relative_dcp, self_citation_pct, snip,
    subfield_refs_to_journal_pct, DatabasePotential, DatabaseSummary, IndicatorEngine,
    IndicatorReport, JournalIndicators, SubjectField,
};
pub use sensitivity::{diff, run_sensitivity, SensitivityReport, VariantSpec};
pub use stats::{distribution_summary, histogram, DistributionSummary, Histogram};
pub use synth::{generate, generate_corpus, naive_oracle, GeneratorSpec};
pub use window::{WindowConfig, YearRange};
