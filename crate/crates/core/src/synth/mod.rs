//! Seeded synthetic corpora and a brute-force reference implementation of
//! the indicator suite, for desk-scale verification.

mod generator;
mod oracle;

pub use generator::{generate, generate_corpus, journal_id, GeneratedCorpus, GeneratorSpec};
pub use oracle::naive_oracle;
