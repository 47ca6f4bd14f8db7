//! Frozen lookup structure over an erased corpus.
//!
//! Paper and source identifiers are interned to dense integer keys. For each
//! paper the index keeps its incoming citation edges (with multiplicity) and a
//! compact tally of its own reference list grouped by cited year and, for
//! references resolved inside the corpus, by cited source.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::corpus::Corpus;
use crate::window::YearRange;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PaperKey(u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceKey(u32);

impl PaperKey {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl SourceKey {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An incoming edge: `citer` lists the cited paper `multiplicity` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Citation {
    pub citer: PaperKey,
    pub multiplicity: u32,
}

/// References of one paper sharing a cited year and a resolution outcome.
/// `target_source` is `None` for references that do not resolve to a paper
/// in the corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct RefTally {
    pub year: i32,
    pub target_source: Option<SourceKey>,
    pub count: u32,
}

/// Reference counts of one paper restricted to a cited-year window.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WindowedRefs {
    pub total: u64,
    pub in_database: u64,
    pub to_source: u64,
}

/// Resolved targets with multiplicity, tallies, unplaced count.
type ResolvedList = (Vec<(PaperKey, u32)>, Vec<RefTally>, u64);

#[derive(Debug, Clone)]
pub struct CitationIndex {
    paper_ids: Vec<String>,
    key_by_id: HashMap<String, PaperKey>,
    paper_source: Vec<SourceKey>,
    paper_year: Vec<i32>,
    paper_is_review: Vec<bool>,
    source_ids: Vec<String>,
    key_by_source: HashMap<String, SourceKey>,
    by_source_year: Vec<BTreeMap<i32, Vec<PaperKey>>>,
    citers_of: Vec<Vec<Citation>>,
    tallies: Vec<Vec<RefTally>>,
    resolved_refs: u64,
    unplaced_refs: u64,
}

impl CitationIndex {
    /// Builds the index. Records with ineligible document types are skipped,
    /// so indexing a raw corpus gives the same index as indexing its erasure.
    pub fn build(corpus: &Corpus) -> Self {
        let papers: Vec<_> = corpus
            .papers()
            .iter()
            .filter(|p| p.doc_type.is_eligible())
            .collect();

        let mut source_set: BTreeSet<&str> = corpus.registry().iter().map(String::as_str).collect();
        source_set.extend(papers.iter().map(|p| p.source_id.as_str()));
        let source_ids: Vec<String> = source_set.into_iter().map(str::to_string).collect();
        let key_by_source: HashMap<String, SourceKey> = source_ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), SourceKey(i as u32)))
            .collect();

        let paper_ids: Vec<String> = papers.iter().map(|p| p.paper_id.clone()).collect();
        let key_by_id: HashMap<String, PaperKey> = paper_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), PaperKey(i as u32)))
            .collect();
        let paper_source: Vec<SourceKey> =
            papers.iter().map(|p| key_by_source[&p.source_id]).collect();
        let paper_year: Vec<i32> = papers.iter().map(|p| p.pub_year).collect();
        let paper_is_review = papers
            .iter()
            .map(|p| p.doc_type == crate::corpus::DocType::Review)
            .collect();

        let mut by_source_year = vec![BTreeMap::<i32, Vec<PaperKey>>::new(); source_ids.len()];
        for (i, p) in papers.iter().enumerate() {
            by_source_year[paper_source[i].index()]
                .entry(p.pub_year)
                .or_default()
                .push(PaperKey(i as u32));
        }

        // Resolve each reference list once: per paper, the resolved targets
        // (with multiplicity) and the tally by (year, target source).
        let resolved: Vec<ResolvedList> = papers
            .par_iter()
            .map(|p| {
                let mut targets: BTreeMap<PaperKey, u32> = BTreeMap::new();
                let mut tally: BTreeMap<(i32, Option<SourceKey>), u32> = BTreeMap::new();
                let mut unplaced = 0u64;
                for r in &p.references {
                    match r.paper_id.as_deref().and_then(|id| key_by_id.get(id)) {
                        Some(&t) => {
                            *targets.entry(t).or_default() += 1;
                            *tally
                                .entry((paper_year[t.index()], Some(paper_source[t.index()])))
                                .or_default() += 1;
                        }
                        None => match r.year {
                            Some(y) => *tally.entry((y, None)).or_default() += 1,
                            None => unplaced += 1,
                        },
                    }
                }
                let tally = tally
                    .into_iter()
                    .map(|((year, target_source), count)| RefTally {
                        year,
                        target_source,
                        count,
                    })
                    .collect();
                (targets.into_iter().collect(), tally, unplaced)
            })
            .collect();

        let mut citers_of = vec![Vec::new(); papers.len()];
        let mut tallies = Vec::with_capacity(papers.len());
        let mut resolved_refs = 0u64;
        let mut unplaced_refs = 0u64;
        for (citer, (targets, tally, unplaced)) in resolved.into_iter().enumerate() {
            for (target, multiplicity) in targets {
                resolved_refs += multiplicity as u64;
                citers_of[target.index()].push(Citation {
                    citer: PaperKey(citer as u32),
                    multiplicity,
                });
            }
            tallies.push(tally);
            unplaced_refs += unplaced;
        }

        CitationIndex {
            paper_ids,
            key_by_id,
            paper_source,
            paper_year,
            paper_is_review,
            source_ids,
            key_by_source,
            by_source_year,
            citers_of,
            tallies,
            resolved_refs,
            unplaced_refs,
        }
    }

    pub fn paper_count(&self) -> usize {
        self.paper_ids.len()
    }

    pub fn paper_key(&self, paper_id: &str) -> Option<PaperKey> {
        self.key_by_id.get(paper_id).copied()
    }

    pub fn paper_id(&self, key: PaperKey) -> &str {
        &self.paper_ids[key.index()]
    }

    pub fn year_of(&self, key: PaperKey) -> i32 {
        self.paper_year[key.index()]
    }

    pub fn source_of(&self, key: PaperKey) -> SourceKey {
        self.paper_source[key.index()]
    }

    pub fn is_review(&self, key: PaperKey) -> bool {
        self.paper_is_review[key.index()]
    }

    /// Registry sources plus any publishing source, sorted by id.
    pub fn sources(&self) -> impl ExactSizeIterator<Item = (SourceKey, &str)> {
        self.source_ids
            .iter()
            .enumerate()
            .map(|(i, s)| (SourceKey(i as u32), s.as_str()))
    }

    pub fn source_key(&self, source_id: &str) -> Option<SourceKey> {
        self.key_by_source.get(source_id).copied()
    }

    pub fn source_id(&self, key: SourceKey) -> &str {
        &self.source_ids[key.index()]
    }

    /// Total multiplicity of resolved references in the corpus.
    pub fn resolved_reference_count(&self) -> u64 {
        self.resolved_refs
    }

    /// References that neither resolve nor carry a year; they belong to no
    /// window.
    pub fn unplaced_reference_count(&self) -> u64 {
        self.unplaced_refs
    }

    /// Eligible papers of `source_id` published inside `window`, in key order.
    /// Unknown sources give an empty list.
    pub fn papers_of_journal(&self, source_id: &str, window: YearRange) -> Vec<PaperKey> {
        match self.source_key(source_id) {
            Some(s) => self.papers_of_source(s, window),
            None => Vec::new(),
        }
    }

    pub fn papers_of_source(&self, source: SourceKey, window: YearRange) -> Vec<PaperKey> {
        let mut out: Vec<PaperKey> = self.by_source_year[source.index()]
            .range(window.first()..=window.last())
            .flat_map(|(_, v)| v.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    pub fn count_papers_of_source(&self, source: SourceKey, year: i32) -> usize {
        self.by_source_year[source.index()]
            .get(&year)
            .map_or(0, Vec::len)
    }

    pub fn citers_of(&self, paper: PaperKey) -> &[Citation] {
        &self.citers_of[paper.index()]
    }

    pub fn tallies(&self, paper: PaperKey) -> &[RefTally] {
        &self.tallies[paper.index()]
    }

    /// Number of citations given in `citing_year` to the papers in `papers`,
    /// counting every reference-list entry. `papers` is treated as a set.
    pub fn citations_to<I>(&self, papers: I, citing_year: i32) -> u64
    where
        I: IntoIterator<Item = PaperKey>,
    {
        let set: BTreeSet<PaperKey> = papers.into_iter().collect();
        set.into_iter()
            .flat_map(|p| self.citers_of(p))
            .filter(|c| self.year_of(c.citer) == citing_year)
            .map(|c| c.multiplicity as u64)
            .sum()
    }

    /// Reference counts of `paper` whose cited year falls in `window`.
    /// `to_source` counts resolved references into `source` (zero when `None`).
    pub fn windowed_refs(
        &self,
        paper: PaperKey,
        window: YearRange,
        source: Option<SourceKey>,
    ) -> WindowedRefs {
        let mut out = WindowedRefs::default();
        for t in self.tallies(paper) {
            if !window.contains(t.year) {
                continue;
            }
            let n = t.count as u64;
            out.total += n;
            if let Some(ts) = t.target_source {
                out.in_database += n;
                if Some(ts) == source {
                    out.to_source += n;
                }
            }
        }
        out
    }
}
