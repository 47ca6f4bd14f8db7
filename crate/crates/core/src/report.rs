//! Tab-separated reports. Each report opens with `#` comment lines carrying
//! the run manifest; data rows follow a single header row. Numbers are
//! printed with two decimals and missing values as empty cells.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::indicators::{IndicatorReport, JournalIndicators};
use crate::sensitivity::SensitivityReport;
use crate::stats::{DistributionSummary, Histogram, PERCENTILE_RANKS};

pub const INDICATOR_COLUMNS: [&str; 10] = [
    "source_id",
    "n_papers",
    "pct_reviews",
    "rip",
    "coverage_pct",
    "dcp",
    "rdcp",
    "snip",
    "pct_self_cites",
    "pct_subfield_refs_to_journal",
];

pub fn fmt2(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2}")).unwrap_or_default()
}

fn write_manifest<W: Write>(out: &mut W, manifest: &[String]) -> Result<()> {
    for line in manifest {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

/// Cells of one journal row, in [`INDICATOR_COLUMNS`] order.
pub fn indicator_cells(j: &JournalIndicators) -> [String; 10] {
    [
        j.source_id.clone(),
        j.n_papers.to_string(),
        fmt2(j.pct_reviews),
        fmt2(j.rip),
        fmt2(j.f.map(|f| 100.0 * f)),
        fmt2(j.r_db),
        fmt2(j.rdcp),
        fmt2(j.snip),
        fmt2(j.pct_self_cites),
        fmt2(j.pct_field_refs_to_journal),
    ]
}

pub fn write_indicators<W: Write>(
    mut out: W,
    manifest: &[String],
    report: &IndicatorReport,
) -> Result<()> {
    write_manifest(&mut out, manifest)?;
    writeln!(
        out,
        "# n_eligible={} median_dcp={:.6}",
        report.summary.n_eligible, report.summary.median_dcp
    )?;
    writeln!(out, "{}", INDICATOR_COLUMNS.join("\t"))?;
    let mut rows: Vec<&JournalIndicators> = report.journals.iter().collect();
    rows.sort_by(|a, b| a.source_id.cmp(&b.source_id));
    for j in rows {
        writeln!(out, "{}", indicator_cells(j).join("\t"))?;
    }
    Ok(())
}

pub fn indicators_to_string(manifest: &[String], report: &IndicatorReport) -> String {
    let mut buf = Vec::new();
    write_indicators(&mut buf, manifest, report).expect("writing to memory");
    String::from_utf8(buf).expect("utf-8")
}

/// Reads one numeric column of an indicator report. Empty cells are `None`.
pub fn read_column<R: BufRead>(input: R, column: &str) -> Result<Vec<Option<f64>>> {
    let mut col: Option<usize> = None;
    let mut values = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split('\t').collect();
        let Some(c) = col else {
            let pos = cells
                .iter()
                .position(|h| *h == column)
                .filter(|&p| p > 0)
                .ok_or_else(|| Error::UnknownColumn(column.to_string()))?;
            col = Some(pos);
            continue;
        };
        let cell = cells.get(c).ok_or_else(|| Error::Malformed {
            line: i + 1,
            message: format!("expected at least {} cells", c + 1),
        })?;
        if cell.is_empty() {
            values.push(None);
        } else {
            values.push(Some(cell.parse::<f64>().map_err(|e| Error::Malformed {
                line: i + 1,
                message: format!("`{cell}`: {e}"),
            })?));
        }
    }
    if col.is_none() {
        return Err(Error::UnknownColumn(column.to_string()));
    }
    Ok(values)
}

pub fn write_stats<W: Write>(
    mut out: W,
    manifest: &[String],
    column: &str,
    summary: &DistributionSummary,
    histogram: &Histogram,
) -> Result<()> {
    write_manifest(&mut out, manifest)?;
    let mut header = vec!["indicator", "n", "mean", "std", "skewness"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    header.extend(PERCENTILE_RANKS.iter().map(|p| format!("p{p}")));
    writeln!(out, "{}", header.join("\t"))?;
    let mut row = vec![
        column.to_string(),
        summary.n.to_string(),
        fmt2(Some(summary.mean)),
        fmt2(Some(summary.std)),
        fmt2(Some(summary.skewness)),
    ];
    row.extend(summary.percentiles.iter().map(|&p| fmt2(Some(p))));
    writeln!(out, "{}", row.join("\t"))?;
    writeln!(out)?;
    writeln!(out, "# histogram")?;
    writeln!(out, "midpoint\tcount\tpct")?;
    for b in &histogram.bins {
        writeln!(
            out,
            "{:.1}\t{}\t{}",
            b.midpoint(),
            b.count,
            fmt2(Some(b.percent))
        )?;
    }
    Ok(())
}

pub fn write_sensitivity<W: Write>(
    mut out: W,
    manifest: &[String],
    report: &SensitivityReport,
) -> Result<()> {
    write_manifest(&mut out, manifest)?;
    writeln!(out, "# default: {}", report.default_config)?;
    writeln!(out, "# variant: {}", report.variant_config)?;
    writeln!(
        out,
        "source_id\tbig\trip_default\trip_variant\trip_diff\tsnip_default\tsnip_variant\tsnip_diff"
    )?;
    for j in &report.per_journal {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            j.source_id,
            u8::from(j.big),
            fmt2(j.rip.default),
            fmt2(j.rip.variant),
            fmt2(j.rip.diff),
            fmt2(j.snip.default),
            fmt2(j.snip.variant),
            fmt2(j.snip.diff),
        )?;
    }
    writeln!(out)?;
    writeln!(out, "# aggregates")?;
    writeln!(out, "indicator\tstratum\tn\tmean_diff\tmedian_diff")?;
    for a in &report.aggregates {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            a.measure,
            a.stratum,
            a.n,
            fmt2(a.mean),
            fmt2(a.median)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicators::DatabaseSummary;

    fn journal(id: &str, rip: Option<f64>) -> JournalIndicators {
        JournalIndicators {
            source_id: id.into(),
            n_papers: 3,
            pct_reviews: Some(100.0 / 3.0),
            cites: 4,
            rip,
            m: 2,
            r: Some(3.0),
            f: Some(0.625),
            r_db: Some(1.875),
            rdcp: Some(1.0),
            snip: rip,
            pct_self_cites: None,
            pct_field_refs_to_journal: Some(0.0),
        }
    }

    #[test]
    fn rows_sorted_nulls_empty() {
        let report = IndicatorReport {
            journals: vec![journal("b", None), journal("a", Some(4.0 / 3.0))],
            summary: DatabaseSummary {
                n_eligible: 2,
                median_dcp: 1.875,
            },
        };
        let s = indicators_to_string(&["tool=test".into()], &report);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# tool=test");
        assert_eq!(lines[2], INDICATOR_COLUMNS.join("\t"));
        assert_eq!(
            lines[3],
            "a\t3\t33.33\t1.33\t62.50\t1.88\t1.00\t1.33\t\t0.00"
        );
        assert_eq!(lines[4], "b\t3\t33.33\t\t62.50\t1.88\t1.00\t\t\t0.00");

        let rip = read_column(s.as_bytes(), "rip").unwrap();
        assert_eq!(rip, vec![Some(1.33), None]);
        assert_eq!(
            read_column(s.as_bytes(), "nope"),
            Err(Error::UnknownColumn("nope".into()))
        );
        assert!(read_column(s.as_bytes(), "source_id").is_err());
    }
}
