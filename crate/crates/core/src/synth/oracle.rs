//! Brute-force evaluation of the indicator suite straight from the record
//! list. Shares no counting code with [`crate::indicators`] or
//! [`crate::index`]; it exists to be compared against them.

use std::collections::BTreeMap;

use crate::corpus::{Corpus, DocType, PaperRecord, ReferenceRecord};
use crate::error::{Error, Result};
use crate::indicators::{DatabaseSummary, IndicatorReport, JournalIndicators};
use crate::window::WindowConfig;

fn is_paper(p: &PaperRecord) -> bool {
    matches!(
        p.doc_type,
        DocType::Article | DocType::Review | DocType::ProceedingsPaper
    )
}

fn between(year: i32, first: i32, last: i32) -> bool {
    year >= first && year <= last
}

pub fn naive_oracle(corpus: &Corpus, config: &WindowConfig) -> Result<IndicatorReport> {
    let y = config.citing_year();
    let (ind_lo, ind_hi) = (
        config.indicator_window().first(),
        config.indicator_window().last(),
    );
    let (fld_lo, fld_hi) = (config.field_window().first(), config.field_window().last());

    let papers: Vec<&PaperRecord> = corpus.papers().iter().filter(|p| is_paper(p)).collect();
    let lookup: BTreeMap<&str, &PaperRecord> =
        papers.iter().map(|p| (p.paper_id.as_str(), *p)).collect();
    let resolve = |r: &ReferenceRecord| -> Option<&PaperRecord> {
        r.paper_id.as_deref().and_then(|id| lookup.get(id).copied())
    };
    let citing: Vec<&PaperRecord> = papers.iter().copied().filter(|p| p.pub_year == y).collect();

    let mut journals = Vec::new();
    for j in corpus.registry() {
        let mut n_papers = 0u64;
        let mut reviews = 0u64;
        for p in &papers {
            if p.source_id == *j && between(p.pub_year, ind_lo, ind_hi) {
                n_papers += 1;
                if p.doc_type == DocType::Review {
                    reviews += 1;
                }
            }
        }

        let mut cites = 0u64;
        let mut own = 0u64;
        let mut field: Vec<&PaperRecord> = Vec::new();
        for p in &citing {
            let mut member = false;
            for r in &p.references {
                if let Some(t) = resolve(r) {
                    if t.source_id == *j && between(t.pub_year, ind_lo, ind_hi) {
                        cites += 1;
                        if p.source_id == *j {
                            own += 1;
                        }
                    }
                    if t.source_id == *j && between(t.pub_year, fld_lo, fld_hi) {
                        member = true;
                    }
                }
            }
            if member {
                field.push(p);
            }
        }

        let mut total = 0u64;
        let mut in_db = 0u64;
        let mut to_j = 0u64;
        for p in &field {
            for r in &p.references {
                let target = resolve(r);
                let year = match target {
                    Some(t) => Some(t.pub_year),
                    None => r.year,
                };
                let Some(year) = year else { continue };
                if !between(year, ind_lo, ind_hi) {
                    continue;
                }
                total += 1;
                if let Some(t) = target {
                    in_db += 1;
                    if t.source_id == *j {
                        to_j += 1;
                    }
                }
            }
        }
        let m = field.len() as u64;

        journals.push(JournalIndicators {
            source_id: j.clone(),
            n_papers,
            pct_reviews: if n_papers > 0 {
                Some(reviews as f64 * 100.0 / n_papers as f64)
            } else {
                None
            },
            cites,
            rip: if n_papers > 0 {
                Some(cites as f64 / n_papers as f64)
            } else {
                None
            },
            m,
            r: if m > 0 {
                Some(total as f64 / m as f64)
            } else {
                None
            },
            f: if m > 0 && total > 0 {
                Some(in_db as f64 / total as f64)
            } else {
                None
            },
            r_db: if m > 0 {
                Some(in_db as f64 / m as f64)
            } else {
                None
            },
            rdcp: None,
            snip: None,
            pct_self_cites: if cites > 0 {
                Some(own as f64 * 100.0 / cites as f64)
            } else {
                None
            },
            pct_field_refs_to_journal: if total > 0 {
                Some(to_j as f64 * 100.0 / total as f64)
            } else {
                None
            },
        });
    }

    let mut dcps: Vec<f64> = journals.iter().filter_map(|j| j.r_db).collect();
    if dcps.is_empty() {
        return Err(Error::NoEligibleJournals);
    }
    dcps.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = dcps.len();
    let median = if n.is_multiple_of(2) {
        (dcps[n / 2 - 1] + dcps[n / 2]) / 2.0
    } else {
        dcps[(n - 1) / 2]
    };
    for j in &mut journals {
        if median > 0.0 {
            j.rdcp = j.r_db.map(|r| r / median);
        }
        if let (Some(rip), Some(rdcp)) = (j.rip, j.rdcp) {
            if rdcp > 0.0 {
                j.snip = Some(rip / rdcp);
            }
        }
    }

    Ok(IndicatorReport {
        journals,
        summary: DatabaseSummary {
            n_eligible: n,
            median_dcp: median,
        },
    })
}
