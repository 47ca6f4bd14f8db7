//! Corpus data model, the line-delimited record format, and the erasure of
//! non-paper document types.
//!
//! One record per line:
//!
//! ```text
//! {"id":"p1","src":"J1","yr":2006,"ty":"article","refs":[{"id":"p0"},{"src":"X","yr":2004}]}
//! ```
//!
//! `ty` is `article`, `review` or `proceedings`; any other label is kept
//! verbatim and marks the record as ineligible.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DocType {
    Article,
    Review,
    ProceedingsPaper,
    Other(String),
}

impl DocType {
    pub fn from_label(label: &str) -> Self {
        match label {
            "article" => DocType::Article,
            "review" => DocType::Review,
            "proceedings" => DocType::ProceedingsPaper,
            other => DocType::Other(other.to_string()),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            DocType::Article => "article",
            DocType::Review => "review",
            DocType::ProceedingsPaper => "proceedings",
            DocType::Other(label) => label,
        }
    }

    /// Articles, reviews and proceedings papers count as papers; everything
    /// else is erased before analysis.
    pub fn is_eligible(&self) -> bool {
        !matches!(self, DocType::Other(_))
    }
}

impl fmt::Display for DocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One entry of a reference list. At least one field is present.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ReferenceRecord {
    pub paper_id: Option<String>,
    pub source_id: Option<String>,
    pub year: Option<i32>,
}

impl ReferenceRecord {
    pub fn to_paper(id: impl Into<String>) -> Self {
        ReferenceRecord {
            paper_id: Some(id.into()),
            ..Default::default()
        }
    }

    pub fn external(year: i32) -> Self {
        ReferenceRecord {
            year: Some(year),
            ..Default::default()
        }
    }

    fn is_empty(&self) -> bool {
        self.paper_id.is_none() && self.source_id.is_none() && self.year.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperRecord {
    pub paper_id: String,
    pub source_id: String,
    pub pub_year: i32,
    pub doc_type: DocType,
    pub references: Vec<ReferenceRecord>,
}

/// Validation bounds applied when a corpus is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusOptions {
    pub min_year: i32,
    pub max_year: i32,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            min_year: 1900,
            max_year: 2100,
        }
    }
}

/// A validated, immutable collection of records plus the registry of
/// database sources.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    papers: Vec<PaperRecord>,
    registry: BTreeSet<String>,
}

impl Corpus {
    pub fn empty() -> Self {
        Corpus {
            papers: Vec::new(),
            registry: BTreeSet::new(),
        }
    }

    /// Validates `papers` and builds a corpus. Without an explicit registry
    /// the registry is the set of publishing sources.
    pub fn new(papers: Vec<PaperRecord>, registry: Option<BTreeSet<String>>) -> Result<Self> {
        Self::with_options(papers, registry, CorpusOptions::default())
    }

    pub fn with_options(
        papers: Vec<PaperRecord>,
        registry: Option<BTreeSet<String>>,
        options: CorpusOptions,
    ) -> Result<Self> {
        let lines: Vec<usize> = (1..=papers.len()).collect();
        validate(&papers, &lines, registry.as_ref(), options)?;
        let registry =
            registry.unwrap_or_else(|| papers.iter().map(|p| p.source_id.clone()).collect());
        Ok(Corpus { papers, registry })
    }

    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    pub fn registry(&self) -> &BTreeSet<String> {
        &self.registry
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    /// Drops every record whose document type is not a paper. References held
    /// by the survivors are left as written; any that pointed at a dropped
    /// record simply no longer resolve. The registry is unchanged.
    pub fn erase_non_papers(self) -> Corpus {
        let Corpus { papers, registry } = self;
        Corpus {
            papers: papers
                .into_iter()
                .filter(|p| p.doc_type.is_eligible())
                .collect(),
            registry,
        }
    }

    /// Writes the corpus in record order, one record per line.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        for paper in &self.papers {
            serde_json::to_writer(&mut out, &WireRecord::from(paper))
                .map_err(|e| Error::Io(e.to_string()))?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("serde_json emits utf-8")
    }

    /// Serialization with records sorted by paper id, so that two corpora
    /// differing only in line order serialize identically.
    pub fn to_canonical_jsonl(&self) -> String {
        let mut sorted: Vec<&PaperRecord> = self.papers.iter().collect();
        sorted.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));
        let mut out = String::new();
        for paper in sorted {
            out.push_str(&serde_json::to_string(&WireRecord::from(paper)).expect("serializable"));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireRecord {
    id: String,
    src: String,
    yr: i32,
    ty: String,
    refs: Vec<WireRef>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireRef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    src: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    yr: Option<i32>,
}

impl From<&PaperRecord> for WireRecord {
    fn from(p: &PaperRecord) -> Self {
        WireRecord {
            id: p.paper_id.clone(),
            src: p.source_id.clone(),
            yr: p.pub_year,
            ty: p.doc_type.label().to_string(),
            refs: p
                .references
                .iter()
                .map(|r| WireRef {
                    id: r.paper_id.clone(),
                    src: r.source_id.clone(),
                    yr: r.year,
                })
                .collect(),
        }
    }
}

impl From<WireRecord> for PaperRecord {
    fn from(w: WireRecord) -> Self {
        PaperRecord {
            paper_id: w.id,
            source_id: w.src,
            pub_year: w.yr,
            doc_type: DocType::from_label(&w.ty),
            references: w
                .refs
                .into_iter()
                .map(|r| ReferenceRecord {
                    paper_id: r.id,
                    source_id: r.src,
                    year: r.yr,
                })
                .collect(),
        }
    }
}

/// Parses a line-delimited corpus. Blank lines are skipped; line numbers in
/// errors are 1-based positions in the input.
pub fn parse_corpus<R: BufRead>(input: R, registry: Option<BTreeSet<String>>) -> Result<Corpus> {
    parse_corpus_with(input, registry, CorpusOptions::default())
}

pub fn parse_corpus_with<R: BufRead>(
    input: R,
    registry: Option<BTreeSet<String>>,
    options: CorpusOptions,
) -> Result<Corpus> {
    let mut papers = Vec::new();
    let mut lines = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::Malformed {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let wire: WireRecord = serde_json::from_str(&line).map_err(|e| Error::Malformed {
            line: line_no,
            message: e.to_string(),
        })?;
        papers.push(PaperRecord::from(wire));
        lines.push(line_no);
    }
    validate(&papers, &lines, registry.as_ref(), options)?;
    let registry = registry.unwrap_or_else(|| papers.iter().map(|p| p.source_id.clone()).collect());
    Ok(Corpus { papers, registry })
}

/// One source id per line; blank lines ignored.
pub fn parse_registry<R: BufRead>(input: R) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for line in input.lines() {
        let line = line?;
        let id = line.trim();
        if !id.is_empty() {
            out.insert(id.to_string());
        }
    }
    Ok(out)
}

fn validate(
    papers: &[PaperRecord],
    lines: &[usize],
    registry: Option<&BTreeSet<String>>,
    options: CorpusOptions,
) -> Result<()> {
    let mut by_id: HashMap<&str, &PaperRecord> = HashMap::with_capacity(papers.len());
    for (paper, &line) in papers.iter().zip(lines) {
        if paper.paper_id.is_empty() {
            return Err(Error::EmptyPaperId {
                paper_id: format!("<line {line}>"),
            });
        }
        if by_id.insert(&paper.paper_id, paper).is_some() {
            return Err(Error::DuplicatePaperId {
                line,
                id: paper.paper_id.clone(),
            });
        }
        if paper.pub_year < options.min_year || paper.pub_year > options.max_year {
            return Err(Error::YearOutOfRange {
                paper_id: paper.paper_id.clone(),
                year: paper.pub_year,
                min: options.min_year,
                max: options.max_year,
            });
        }
        if let Some(reg) = registry {
            if !reg.contains(&paper.source_id) {
                return Err(Error::UnregisteredSource {
                    paper_id: paper.paper_id.clone(),
                    source_id: paper.source_id.clone(),
                });
            }
        }
    }

    for paper in papers {
        for (position, reference) in paper.references.iter().enumerate() {
            if reference.is_empty() {
                return Err(Error::EmptyReference {
                    paper_id: paper.paper_id.clone(),
                    position: position + 1,
                });
            }
            let Some(target) = reference.paper_id.as_deref().and_then(|id| by_id.get(id)) else {
                continue;
            };
            if let Some(src) = &reference.source_id {
                if *src != target.source_id {
                    return Err(Error::ReferenceMismatch {
                        paper_id: paper.paper_id.clone(),
                        target_id: target.paper_id.clone(),
                        field: "src",
                        claimed: src.clone(),
                        actual: target.source_id.clone(),
                    });
                }
            }
            if let Some(yr) = reference.year {
                if yr != target.pub_year {
                    return Err(Error::ReferenceMismatch {
                        paper_id: paper.paper_id.clone(),
                        target_id: target.paper_id.clone(),
                        field: "yr",
                        claimed: yr.to_string(),
                        actual: target.pub_year.to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}
