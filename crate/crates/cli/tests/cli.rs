use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use snip_core::report::{fmt2, indicator_cells, INDICATOR_COLUMNS};
use snip_core::sensitivity::{aggregate_diffs, diff};
use snip_core::{naive_oracle, parse_corpus, WindowConfig};
use tempfile::TempDir;

fn snip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snip"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = snip(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generated(dir: &TempDir, extra: &[&str]) -> PathBuf {
    let out = path(dir, "corpus.jsonl");
    let mut args = vec!["generate", "--seed", "9", "--out", s(&out)];
    args.extend_from_slice(extra);
    ok(&args);
    out
}

fn data_rows(tsv: &str) -> Vec<Vec<String>> {
    tsv.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.split('\t').map(String::from).collect())
        .collect()
}

#[test]
fn empty_corpus_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let empty = path(&dir, "empty.jsonl");
    std::fs::write(&empty, "").unwrap();
    let out = snip(&["compute", "--corpus", s(&empty), "--citing-year", "2007"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(snip(&["compute"]).status.code(), Some(1));
    assert_eq!(snip(&["frobnicate"]).status.code(), Some(1));
    let dir = TempDir::new().unwrap();
    let c = generated(&dir, &[]);
    let out = snip(&[
        "compute",
        "--corpus",
        s(&c),
        "--citing-year",
        "2007",
        "--indicator-window",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(snip(&["--version"]).status.code(), Some(0));
}

#[test]
fn malformed_corpus_reports_line() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.jsonl");
    std::fs::write(
        &bad,
        "{\"id\":\"a\",\"src\":\"J\",\"yr\":2006,\"ty\":\"article\",\"refs\":[]}\nnot json\n",
    )
    .unwrap();
    let out = snip(&["compute", "--corpus", s(&bad), "--citing-year", "2007"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn generate_is_deterministic() {
    let a = ok(&["generate", "--seed", "4"]);
    let b = ok(&["generate", "--seed", "4"]);
    assert_eq!(a, b);
    assert_ne!(a, ok(&["generate", "--seed", "5"]));
}

#[test]
fn generated_coverage_hits_target() {
    let dir = TempDir::new().unwrap();
    let c = generated(
        &dir,
        &[
            "--coverage-target",
            "0.8",
            "--papers-per-year",
            "4",
            "--ineligible-fraction",
            "0.1",
        ],
    );
    let corpus = parse_corpus(std::fs::read(&c).unwrap().as_slice(), None)
        .unwrap()
        .erase_non_papers();
    let ids: std::collections::HashSet<&str> = corpus
        .papers()
        .iter()
        .map(|p| p.paper_id.as_str())
        .collect();
    let (mut inside, mut total) = (0usize, 0usize);
    for r in corpus.papers().iter().flat_map(|p| &p.references) {
        total += 1;
        if r.paper_id.as_deref().is_some_and(|id| ids.contains(id)) {
            inside += 1;
        }
    }
    let share = inside as f64 / total as f64;
    assert!((share - 0.8).abs() <= 0.02, "share {share}");
}

#[test]
fn compute_matches_oracle_after_rounding() {
    let dir = TempDir::new().unwrap();
    let c = generated(
        &dir,
        &["--ineligible-fraction", "0.1", "--review-fraction", "0.2"],
    );
    let tsv = ok(&["compute", "--corpus", s(&c), "--citing-year", "2007"]);
    let header = tsv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, INDICATOR_COLUMNS.join("\t"));

    let corpus = parse_corpus(std::fs::read(&c).unwrap().as_slice(), None).unwrap();
    let oracle = naive_oracle(&corpus, &WindowConfig::new(2007)).unwrap();
    let rows = data_rows(&tsv);
    assert_eq!(rows.len(), oracle.journals.len());
    for (row, j) in rows.iter().zip(&oracle.journals) {
        assert_eq!(row, &indicator_cells(j).to_vec());
    }
}

#[test]
fn compute_honours_registry_and_windows() {
    let dir = TempDir::new().unwrap();
    let corpus = path(&dir, "c.jsonl");
    std::fs::write(
        &corpus,
        "{\"id\":\"a\",\"src\":\"J\",\"yr\":2005,\"ty\":\"article\",\"refs\":[]}\n\
         {\"id\":\"b\",\"src\":\"K\",\"yr\":2007,\"ty\":\"article\",\"refs\":[{\"id\":\"a\"},{\"yr\":2003}]}\n",
    )
    .unwrap();
    let reg = path(&dir, "reg.txt");
    std::fs::write(&reg, "J\nK\nZ\n").unwrap();
    let tsv = ok(&[
        "compute",
        "--corpus",
        s(&corpus),
        "--registry",
        s(&reg),
        "--citing-year",
        "2007",
        "--indicator-window",
        "5",
        "--field-window",
        "5",
    ]);
    assert!(tsv.contains("indicator_window=2002-2006 field_window=2002-2006"));
    let rows = data_rows(&tsv);
    assert_eq!(rows.len(), 3);
    assert_eq!(
        rows[0].join("\t"),
        "J\t1\t0.00\t1.00\t50.00\t1.00\t1.00\t1.00\t0.00\t50.00"
    );
    assert_eq!(rows[2].join("\t"), "Z\t0\t\t\t\t\t\t\t\t");
}

fn results_file(dir: &TempDir, rips: &[&str]) -> PathBuf {
    let p = path(dir, "results.tsv");
    let mut text = format!("# hand-made\n{}\n", INDICATOR_COLUMNS.join("\t"));
    for (i, rip) in rips.iter().enumerate() {
        text.push_str(&format!(
            "J{i}\t10\t0.00\t{rip}\t80.00\t5.00\t1.00\t\t0.00\t1.00\n"
        ));
    }
    std::fs::write(&p, text).unwrap();
    p
}

fn stats_row(out: &str) -> Vec<String> {
    data_rows(out)[0].clone()
}

#[test]
fn stats_constant_column() {
    let dir = TempDir::new().unwrap();
    let r = results_file(&dir, &["1.50", "1.50", "1.50"]);
    let out = ok(&["stats", "--results", s(&r), "--indicator", "rip"]);
    let row = stats_row(&out);
    assert_eq!(&row[..5], &["rip", "3", "1.50", "0.00", "0.00"]);
}

#[test]
fn stats_median_interpolates() {
    let dir = TempDir::new().unwrap();
    let r = results_file(&dir, &["1", "2", "3", "10", ""]);
    let out = ok(&["stats", "--results", s(&r), "--indicator", "rip"]);
    let row = stats_row(&out);
    assert_eq!(row[1], "4");
    assert_eq!(row[2], "4.00");
    assert_eq!(row[6], "2.50");
}

#[test]
fn stats_histogram_bins() {
    let dir = TempDir::new().unwrap();
    let r = results_file(&dir, &["2.0", "2.9"]);
    let out = ok(&["stats", "--results", s(&r), "--indicator", "rip"]);
    let hist: Vec<&str> = out
        .lines()
        .skip_while(|l| *l != "# histogram")
        .skip(2)
        .collect();
    assert_eq!(hist, vec!["0.5\t0\t0.00", "1.5\t0\t0.00", "2.5\t2\t100.00"]);
}

#[test]
fn stats_rejects_unknown_and_all_null_columns() {
    let dir = TempDir::new().unwrap();
    let r = results_file(&dir, &["1.0"]);
    assert_eq!(
        snip(&["stats", "--results", s(&r), "--indicator", "h_index"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        snip(&["stats", "--results", s(&r), "--indicator", "snip"])
            .status
            .code(),
        Some(2)
    );
}

fn sensitivity(corpus: &Path, variant: &str) -> String {
    ok(&[
        "sensitivity",
        "--corpus",
        s(corpus),
        "--citing-year",
        "2007",
        "--variant",
        variant,
        "--big-threshold",
        "2",
    ])
}

fn aggregates(out: &str) -> Vec<Vec<String>> {
    let tail: String = out
        .lines()
        .skip_while(|l| *l != "# aggregates")
        .skip(1)
        .map(|l| format!("{l}\n"))
        .collect();
    data_rows(&tail)
}

#[test]
fn sensitivity_none_is_all_zero() {
    let dir = TempDir::new().unwrap();
    let c = generated(&dir, &[]);
    let out = sensitivity(&c, "none");
    for row in aggregates(&out) {
        assert!(row[3].is_empty() || row[3] == "0.00", "{row:?}");
        assert!(row[4].is_empty() || row[4] == "0.00", "{row:?}");
    }
}

#[test]
fn sensitivity_field_window_short_rip_rows_zero() {
    let dir = TempDir::new().unwrap();
    let c = generated(&dir, &["--papers-per-year", "3"]);
    let out = sensitivity(&c, "field-window-short");
    let agg = aggregates(&out);
    assert_eq!(agg[0][..2], ["rip", "all"]);
    assert_eq!(agg[0][3..], ["0.00", "0.00"]);
    assert_eq!(agg[1][..2], ["rip", "big"]);
    assert_eq!(agg[1][3..], ["0.00", "0.00"]);
    assert_ne!(agg[2][3], "0.00");
}

#[test]
fn sensitivity_aggregates_match_oracle_recomputation() {
    let dir = TempDir::new().unwrap();
    let c = generated(&dir, &["--papers-per-year", "3"]);
    let out = sensitivity(&c, "shift-citing-year");
    let corpus = parse_corpus(std::fs::read(&c).unwrap().as_slice(), None).unwrap();
    let d = naive_oracle(&corpus, &WindowConfig::new(2007)).unwrap();
    let v = naive_oracle(&corpus, &WindowConfig::new(2006)).unwrap();
    let counts: std::collections::BTreeMap<(&str, i32), usize> = corpus
        .papers()
        .iter()
        .filter(|p| p.doc_type.is_eligible())
        .fold(Default::default(), |mut m, p| {
            *m.entry((p.source_id.as_str(), p.pub_year)).or_default() += 1;
            m
        });
    let big = |id: &str| (2004..=2006).all(|y| counts.get(&(id, y)).copied().unwrap_or(0) >= 2);

    let mut expected = Vec::new();
    for (measure, pick) in [
        (
            "rip",
            (|j: &snip_core::JournalIndicators| j.rip) as fn(&_) -> _,
        ),
        ("snip", |j: &snip_core::JournalIndicators| j.snip),
    ] {
        for stratum in ["all", "big"] {
            let diffs: Vec<f64> = d
                .journals
                .iter()
                .zip(&v.journals)
                .filter(|(a, _)| stratum == "all" || big(&a.source_id))
                .filter_map(|(a, b)| diff(pick(a), pick(b)))
                .collect();
            let (mean, median) = aggregate_diffs(&diffs);
            expected.push(vec![
                measure.to_string(),
                stratum.to_string(),
                diffs.len().to_string(),
                fmt2(mean),
                fmt2(median),
            ]);
        }
    }
    assert_eq!(aggregates(&out), expected);
}
