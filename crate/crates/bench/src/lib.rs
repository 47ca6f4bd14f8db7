//! Fixture corpora shared by the benchmarks.

use snip_core::GeneratorSpec;

/// Generator settings for a corpus of roughly `journals * 12 * per_year`
/// eligible papers over 1996-2007.
pub fn spec(journals: usize, per_year: f64, seed: u64) -> GeneratorSpec {
    let fields = 5.min(journals).max(1);
    GeneratorSpec {
        seed,
        n_fields: fields,
        journals_per_field: journals.div_ceil(fields),
        papers_per_journal_year: per_year,
        refs_per_paper_mean: vec![5.0, 10.0, 15.0, 20.0, 30.0][..fields].to_vec(),
        ..GeneratorSpec::default()
    }
}
