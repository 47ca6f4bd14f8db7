use std::collections::{BTreeMap, BTreeSet};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Poisson;

use crate::corpus::{Corpus, DocType, PaperRecord, ReferenceRecord};
use crate::error::{Error, Result};

const INELIGIBLE_LABELS: [&str; 4] = ["editorial", "letter", "note", "erratum"];
const INELIGIBLE_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;
/// Share of external references rewritten to point at an ineligible record.
const REWRITE_TO_INELIGIBLE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub n_fields: usize,
    pub journals_per_field: usize,
    pub first_year: i32,
    pub last_year: i32,
    /// Poisson mean of eligible papers per journal and year.
    pub papers_per_journal_year: f64,
    /// Poisson mean of reference-list length, one per field; a single value
    /// applies to every field.
    pub refs_per_paper_mean: Vec<f64>,
    /// Share of references pointing outside the database.
    pub external_fraction: f64,
    pub review_fraction: f64,
    /// Expected share of ineligible records among all records.
    pub ineligible_fraction: f64,
    /// Share of in-database references aimed at another field.
    pub cross_field_fraction: f64,
    /// Relative weight of reference age 1, 2, ... years.
    pub ref_age_weights: Vec<f64>,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        GeneratorSpec {
            seed: 1,
            n_fields: 5,
            journals_per_field: 10,
            first_year: 1996,
            last_year: 2007,
            papers_per_journal_year: 1.7,
            refs_per_paper_mean: vec![10.0],
            external_fraction: 0.2,
            review_fraction: 0.05,
            ineligible_fraction: 0.0,
            cross_field_fraction: 0.0,
            ref_age_weights: vec![10.0, 12.0, 10.0, 8.0, 6.0, 5.0, 4.0, 3.0, 2.0, 2.0],
        }
    }
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidSpec(msg.to_string()));
        if self.n_fields == 0 || self.journals_per_field == 0 {
            return bad("need at least one field and one journal per field");
        }
        if self.first_year > self.last_year {
            return bad("empty year range");
        }
        if !(self.papers_per_journal_year > 0.0 && self.papers_per_journal_year.is_finite()) {
            return bad("papers per journal-year must be positive");
        }
        if !(self.refs_per_paper_mean.len() == 1 || self.refs_per_paper_mean.len() == self.n_fields)
        {
            return bad("give one reference mean, or one per field");
        }
        if self
            .refs_per_paper_mean
            .iter()
            .any(|m| !(*m > 0.0 && m.is_finite()))
        {
            return bad("reference means must be positive");
        }
        for (name, v) in [
            ("external fraction", self.external_fraction),
            ("review fraction", self.review_fraction),
            ("cross-field fraction", self.cross_field_fraction),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidSpec(format!("{name} must lie in [0, 1]")));
            }
        }
        if !(0.0..1.0).contains(&self.ineligible_fraction) {
            return bad("ineligible fraction must lie in [0, 1)");
        }
        if self.ref_age_weights.is_empty()
            || self
                .ref_age_weights
                .iter()
                .any(|w| !(*w >= 0.0 && w.is_finite()))
            || self.ref_age_weights.iter().sum::<f64>() <= 0.0
        {
            return bad("reference age weights must be non-negative with a positive sum");
        }
        Ok(())
    }

    fn refs_mean(&self, field: usize) -> f64 {
        if self.refs_per_paper_mean.len() == 1 {
            self.refs_per_paper_mean[0]
        } else {
            self.refs_per_paper_mean[field]
        }
    }
}

/// A generated corpus with its bookkeeping.
#[derive(Debug, Clone)]
pub struct GeneratedCorpus {
    pub corpus: Corpus,
    /// Eligible papers per (journal, year).
    pub ledger: BTreeMap<(String, i32), usize>,
    /// Field index of every journal.
    pub field_of: BTreeMap<String, usize>,
}

pub fn journal_id(field: usize, journal: usize) -> String {
    format!("F{field:02}J{journal:03}")
}

/// Deterministic in `spec.seed`. The eligible part of the corpus does not
/// depend on `ineligible_fraction`: ineligible records come from a separate
/// random stream.
pub fn generate(spec: &GeneratorSpec) -> Result<GeneratedCorpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let years: Vec<i32> = (spec.first_year..=spec.last_year).collect();
    let papers_dist = Poisson::new(spec.papers_per_journal_year)
        .map_err(|e| Error::InvalidSpec(e.to_string()))?;

    let mut field_of = BTreeMap::new();
    let mut registry = BTreeSet::new();
    for f in 0..spec.n_fields {
        for j in 0..spec.journals_per_field {
            let id = journal_id(f, j);
            field_of.insert(id.clone(), f);
            registry.insert(id);
        }
    }

    // papers by field, then year
    let mut pool: Vec<BTreeMap<i32, Vec<usize>>> = vec![BTreeMap::new(); spec.n_fields];
    let mut papers: Vec<PaperRecord> = Vec::new();
    let mut paper_field: Vec<usize> = Vec::new();
    let mut ledger = BTreeMap::new();
    for &year in &years {
        for f in 0..spec.n_fields {
            for j in 0..spec.journals_per_field {
                let source = journal_id(f, j);
                let n = papers_dist.sample(&mut rng) as usize;
                ledger.insert((source.clone(), year), n);
                for k in 0..n {
                    let doc_type = if rng.random_bool(spec.review_fraction) {
                        DocType::Review
                    } else {
                        DocType::Article
                    };
                    pool[f].entry(year).or_default().push(papers.len());
                    paper_field.push(f);
                    papers.push(PaperRecord {
                        paper_id: format!("{source}-{year}-{k:04}"),
                        source_id: source.clone(),
                        pub_year: year,
                        doc_type,
                        references: Vec::new(),
                    });
                }
            }
        }
    }

    let ages = spec.ref_age_weights.len();
    let all_ages = WeightedIndex::new(&spec.ref_age_weights).expect("validated weights");
    let ref_dists: Vec<Poisson<f64>> = (0..spec.n_fields)
        .map(|f| Poisson::new(spec.refs_mean(f)).expect("validated mean"))
        .collect();

    // ages with at least one citable paper in `field`
    let feasible = |field: usize, year: i32| -> Option<WeightedIndex<f64>> {
        let w: Vec<f64> = (1..=ages)
            .map(|a| {
                let has = pool[field]
                    .get(&(year - a as i32))
                    .is_some_and(|v| !v.is_empty());
                if has {
                    spec.ref_age_weights[a - 1]
                } else {
                    0.0
                }
            })
            .collect();
        WeightedIndex::new(&w).ok()
    };

    let mut references: Vec<Vec<ReferenceRecord>> = Vec::with_capacity(papers.len());
    for (i, paper) in papers.iter().enumerate() {
        let field = paper_field[i];
        let Some(own_ages) = feasible(field, paper.pub_year) else {
            references.push(Vec::new());
            continue;
        };
        let n_refs = ref_dists[field].sample(&mut rng) as usize;
        let mut refs = Vec::with_capacity(n_refs);
        for _ in 0..n_refs {
            if rng.random_bool(spec.external_fraction) {
                let age = all_ages.sample(&mut rng) as i32 + 1;
                refs.push(ReferenceRecord::external(paper.pub_year - age));
                continue;
            }
            let mut target_field = field;
            if spec.n_fields > 1 && rng.random_bool(spec.cross_field_fraction) {
                let other = rng.random_range(0..spec.n_fields - 1);
                target_field = if other >= field { other + 1 } else { other };
            }
            let dist = match feasible(target_field, paper.pub_year) {
                Some(d) => d,
                None => {
                    target_field = field;
                    own_ages.clone()
                }
            };
            let age = dist.sample(&mut rng) as i32 + 1;
            let candidates = &pool[target_field][&(paper.pub_year - age)];
            let t = &papers[candidates[rng.random_range(0..candidates.len())]];
            refs.push(ReferenceRecord {
                paper_id: Some(t.paper_id.clone()),
                source_id: Some(t.source_id.clone()),
                year: Some(t.pub_year),
            });
        }
        references.push(refs);
    }
    for (p, refs) in papers.iter_mut().zip(references) {
        p.references = refs;
    }

    if spec.ineligible_fraction > 0.0 {
        add_ineligible(spec, &mut papers, &paper_field, &pool)?;
    }

    let corpus = Corpus::new(papers, Some(registry))?;
    Ok(GeneratedCorpus {
        corpus,
        ledger,
        field_of,
    })
}

fn add_ineligible(
    spec: &GeneratorSpec,
    papers: &mut Vec<PaperRecord>,
    paper_field: &[usize],
    pool: &[BTreeMap<i32, Vec<usize>>],
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ INELIGIBLE_STREAM);
    let q = spec.ineligible_fraction;
    let per_journal_year = Poisson::new(spec.papers_per_journal_year * q / (1.0 - q))
        .map_err(|e| Error::InvalidSpec(e.to_string()))?;
    let refs_dist = Poisson::new(3.0).expect("positive mean");
    let n_eligible = papers.len();

    let mut extra: Vec<PaperRecord> = Vec::new();
    // ineligible records by (field, year)
    let mut by_field_year: BTreeMap<(usize, i32), Vec<usize>> = BTreeMap::new();
    for year in spec.first_year..=spec.last_year {
        for f in 0..spec.n_fields {
            for j in 0..spec.journals_per_field {
                let source = journal_id(f, j);
                let n = per_journal_year.sample(&mut rng) as usize;
                for k in 0..n {
                    let label = INELIGIBLE_LABELS[rng.random_range(0..INELIGIBLE_LABELS.len())];
                    let mut refs = Vec::new();
                    let earlier: Vec<&usize> =
                        pool[f].range(..year).flat_map(|(_, v)| v.iter()).collect();
                    if !earlier.is_empty() {
                        for _ in 0..refs_dist.sample(&mut rng) as usize {
                            let t = &papers[*earlier[rng.random_range(0..earlier.len())]];
                            refs.push(ReferenceRecord::to_paper(t.paper_id.clone()));
                        }
                    }
                    by_field_year
                        .entry((f, year))
                        .or_default()
                        .push(extra.len());
                    extra.push(PaperRecord {
                        paper_id: format!("{source}-{year}-x{k:04}"),
                        source_id: source.clone(),
                        pub_year: year,
                        doc_type: DocType::Other(label.to_string()),
                        references: refs,
                    });
                }
            }
        }
    }

    // Point some external references at ineligible records of the same year.
    // After erasure they are external again, so indicators are unaffected.
    for i in 0..n_eligible {
        let field = paper_field[i];
        for r in papers[i].references.iter_mut() {
            let (None, Some(year)) = (&r.paper_id, r.year) else {
                continue;
            };
            if !rng.random_bool(REWRITE_TO_INELIGIBLE) {
                continue;
            }
            if let Some(cands) = by_field_year.get(&(field, year)) {
                let t = &extra[cands[rng.random_range(0..cands.len())]];
                *r = ReferenceRecord {
                    paper_id: Some(t.paper_id.clone()),
                    source_id: Some(t.source_id.clone()),
                    year: Some(t.pub_year),
                };
            }
        }
    }
    papers.extend(extra);
    Ok(())
}

pub fn generate_corpus(spec: &GeneratorSpec) -> Result<Corpus> {
    generate(spec).map(|g| g.corpus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GeneratorSpec {
        GeneratorSpec {
            n_fields: 2,
            journals_per_field: 3,
            first_year: 2000,
            last_year: 2007,
            papers_per_journal_year: 3.0,
            ..Default::default()
        }
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = generate_corpus(&small()).unwrap().to_jsonl();
        let b = generate_corpus(&small()).unwrap().to_jsonl();
        assert_eq!(a, b);
        let c = generate_corpus(&GeneratorSpec { seed: 2, ..small() })
            .unwrap()
            .to_jsonl();
        assert_ne!(a, c);
    }

    #[test]
    fn degenerate_specs_rejected() {
        for spec in [
            GeneratorSpec {
                n_fields: 0,
                ..small()
            },
            GeneratorSpec {
                journals_per_field: 0,
                ..small()
            },
            GeneratorSpec {
                first_year: 2008,
                ..small()
            },
            GeneratorSpec {
                papers_per_journal_year: 0.0,
                ..small()
            },
            GeneratorSpec {
                external_fraction: 1.5,
                ..small()
            },
            GeneratorSpec {
                ineligible_fraction: 1.0,
                ..small()
            },
            GeneratorSpec {
                refs_per_paper_mean: vec![1.0, 2.0, 3.0],
                ..small()
            },
            GeneratorSpec {
                ref_age_weights: vec![0.0, 0.0],
                ..small()
            },
        ] {
            assert!(
                matches!(generate(&spec), Err(Error::InvalidSpec(_))),
                "{spec:?}"
            );
        }
    }

    #[test]
    fn ledger_matches_records() {
        let g = generate(&small()).unwrap();
        let mut counted: BTreeMap<(String, i32), usize> = BTreeMap::new();
        for p in g.corpus.papers() {
            *counted
                .entry((p.source_id.clone(), p.pub_year))
                .or_default() += 1;
        }
        for (k, &n) in &g.ledger {
            assert_eq!(counted.get(k).copied().unwrap_or(0), n);
        }
        assert_eq!(g.corpus.registry().len(), 6);
    }

    #[test]
    fn references_point_backwards_within_field() {
        let g = generate(&small()).unwrap();
        let by_id: BTreeMap<&str, &PaperRecord> = g
            .corpus
            .papers()
            .iter()
            .map(|p| (p.paper_id.as_str(), p))
            .collect();
        for p in g.corpus.papers() {
            for r in &p.references {
                let y = r.year.unwrap();
                assert!(y < p.pub_year && y >= p.pub_year - 10);
                if let Some(id) = &r.paper_id {
                    let t = by_id[id.as_str()];
                    assert_eq!(g.field_of[&t.source_id], g.field_of[&p.source_id]);
                }
            }
        }
    }

    #[test]
    fn ineligible_records_do_not_change_the_eligible_part() {
        let base = generate(&small()).unwrap();
        let with = generate(&GeneratorSpec {
            ineligible_fraction: 0.2,
            ..small()
        })
        .unwrap();
        assert_eq!(base.ledger, with.ledger);
        let n_inel = with
            .corpus
            .papers()
            .iter()
            .filter(|p| !p.doc_type.is_eligible())
            .count();
        assert!(n_inel > 0);
        let erased = with.corpus.clone().erase_non_papers();
        assert_eq!(erased.len(), base.corpus.len());
        assert_eq!(erased.registry(), base.corpus.registry());
    }
}
