//! Command-line front end: `compute`, `stats`, `sensitivity` and `generate`.
//!
//! Exit status: 0 on success, 1 for usage errors, 2 for data errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};
use snip_core::report::{self, INDICATOR_COLUMNS};
use snip_core::sensitivity::run_sensitivity_with;
use snip_core::{
    compute_all, distribution_summary, histogram, parse_corpus, parse_registry, synth, Corpus,
    GeneratorSpec, VariantSpec, WindowConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "snip",
    version,
    about = "Source-normalized journal impact indicators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-journal indicator table.
    Compute(ComputeArgs),
    /// Distribution summary and unit-bin histogram of one indicator column.
    Stats(StatsArgs),
    /// DIFF between the default windows and a variant.
    Sensitivity(SensitivityArgs),
    /// Write a synthetic corpus.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// One source id per line; defaults to every publishing source.
    #[arg(long)]
    pub registry: Option<PathBuf>,
    #[arg(long)]
    pub citing_year: i32,
    /// Cited years counted for impact and potentials.
    #[arg(long, default_value_t = 3)]
    pub indicator_window: u32,
    /// Cited years used to delimit subject fields.
    #[arg(long, default_value_t = 10)]
    pub field_window: u32,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub input: CorpusArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// A report written by `compute`.
    #[arg(long)]
    pub results: PathBuf,
    #[arg(long)]
    pub indicator: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    None,
    FieldWindowShort,
    IndicatorWindowShort,
    ShiftCitingYear,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub input: CorpusArgs,
    #[arg(long, value_enum)]
    pub variant: VariantArg,
    /// Papers per indicator-window year for the "big" stratum.
    #[arg(long, default_value_t = snip_core::sensitivity::BIG_JOURNAL_PAPERS_PER_YEAR)]
    pub big_threshold: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub fields: usize,
    #[arg(long, default_value_t = 10)]
    pub journals_per_field: usize,
    #[arg(long, default_value_t = 1996)]
    pub first_year: i32,
    #[arg(long, default_value_t = 2007)]
    pub last_year: i32,
    #[arg(long, default_value_t = 1.7)]
    pub papers_per_year: f64,
    /// Mean reference-list length, one value or one per field.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    pub refs_mean: Vec<f64>,
    /// Share of references published in database sources.
    #[arg(long, default_value_t = 0.8)]
    pub coverage_target: f64,
    #[arg(long, default_value_t = 0.05)]
    pub review_fraction: f64,
    #[arg(long, default_value_t = 0.0)]
    pub ineligible_fraction: f64,
    #[arg(long, default_value_t = 0.0)]
    pub cross_field_fraction: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the source registry here.
    #[arg(long)]
    pub registry_out: Option<PathBuf>,
}

impl GenerateArgs {
    pub fn spec(&self) -> GeneratorSpec {
        GeneratorSpec {
            seed: self.seed,
            n_fields: self.fields,
            journals_per_field: self.journals_per_field,
            first_year: self.first_year,
            last_year: self.last_year,
            papers_per_journal_year: self.papers_per_year,
            refs_per_paper_mean: self.refs_mean.clone(),
            external_fraction: 1.0 - self.coverage_target,
            review_fraction: self.review_fraction,
            ineligible_fraction: self.ineligible_fraction,
            cross_field_fraction: self.cross_field_fraction,
            ..GeneratorSpec::default()
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(e) => write!(f, "error: {e:#}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Data(e)
    }
}

/// Attribution written as `#` lines at the top of every report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub config: String,
    pub corpus_digest: Option<String>,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, config: String, corpus_digest: Option<String>) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            corpus_digest,
            timestamp: timestamp(),
        }
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("snip {} {}", self.tool_version, self.command),
            self.config.clone(),
        ];
        if let Some(d) = &self.corpus_digest {
            out.push(format!("corpus_sha256={d}"));
        }
        out.push(format!("generated_at={}", self.timestamp));
        out
    }
}

/// RFC 3339 UTC time, taken from `SOURCE_DATE_EPOCH` when set.
fn timestamp() -> String {
    let when = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| chrono::DateTime::from_timestamp(secs, 0))
        .unwrap_or_else(chrono::Utc::now);
    when.format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

/// SHA-256 over the line-order-independent serialization and the registry.
pub fn corpus_digest(corpus: &Corpus) -> String {
    let mut h = Sha256::new();
    h.update(corpus.to_canonical_jsonl().as_bytes());
    for s in corpus.registry() {
        h.update(b"\x00");
        h.update(s.as_bytes());
    }
    hex::encode(h.finalize())
}

fn window_config(args: &CorpusArgs) -> Result<WindowConfig, CliError> {
    WindowConfig::with_lengths(args.citing_year, args.indicator_window, args.field_window)
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn load_corpus(args: &CorpusArgs) -> anyhow::Result<Corpus> {
    let registry = match &args.registry {
        Some(path) => {
            let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            Some(
                parse_registry(BufReader::new(f))
                    .with_context(|| format!("reading {}", path.display()))?,
            )
        }
        None => None,
    };
    let f =
        File::open(&args.corpus).with_context(|| format!("opening {}", args.corpus.display()))?;
    parse_corpus(BufReader::new(f), registry)
        .with_context(|| format!("parsing {}", args.corpus.display()))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn cmd_compute(args: &ComputeArgs) -> Result<Vec<u8>, CliError> {
    let config = window_config(&args.input)?;
    let corpus = load_corpus(&args.input)?;
    let results = compute_all(&corpus, &config).context("computing indicators")?;
    let manifest = RunManifest::new("compute", config.to_string(), Some(corpus_digest(&corpus)));
    let mut buf = Vec::new();
    report::write_indicators(&mut buf, &manifest.lines(), &results).map_err(anyhow::Error::from)?;
    Ok(buf)
}

pub fn cmd_stats(args: &StatsArgs) -> Result<Vec<u8>, CliError> {
    if !INDICATOR_COLUMNS[1..].contains(&args.indicator.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown indicator `{}`; expected one of {}",
            args.indicator,
            INDICATOR_COLUMNS[1..].join(", ")
        )));
    }
    let f =
        File::open(&args.results).with_context(|| format!("opening {}", args.results.display()))?;
    let column = report::read_column(BufReader::new(f), &args.indicator)
        .with_context(|| format!("reading {}", args.results.display()))?;
    let values: Vec<f64> = column.into_iter().flatten().collect();
    if values.is_empty() {
        return Err(anyhow!(snip_core::Error::AllNull(args.indicator.clone())).into());
    }
    let summary = distribution_summary(&values).map_err(anyhow::Error::from)?;
    let hist = histogram(&values).map_err(anyhow::Error::from)?;
    let manifest = RunManifest::new(
        "stats",
        format!(
            "results={} indicator={}",
            args.results.display(),
            args.indicator
        ),
        None,
    );
    let mut buf = Vec::new();
    report::write_stats(
        &mut buf,
        &manifest.lines(),
        &args.indicator,
        &summary,
        &hist,
    )
    .map_err(anyhow::Error::from)?;
    Ok(buf)
}

pub fn cmd_sensitivity(args: &SensitivityArgs) -> Result<Vec<u8>, CliError> {
    let config = window_config(&args.input)?;
    let variant = match args.variant {
        VariantArg::None => VariantSpec::Custom(config),
        VariantArg::FieldWindowShort => VariantSpec::FieldWindowShort,
        VariantArg::IndicatorWindowShort => VariantSpec::IndicatorWindowShort,
        VariantArg::ShiftCitingYear => VariantSpec::ShiftCitingYear,
    };
    let corpus = load_corpus(&args.input)?;
    let result = run_sensitivity_with(&corpus, &config, variant, args.big_threshold)
        .context("running sensitivity analysis")?;
    let variant_name = match args.variant {
        VariantArg::None => "none".to_string(),
        _ => variant.to_string(),
    };
    let manifest = RunManifest::new(
        "sensitivity",
        format!(
            "{config} variant={variant_name} big_threshold={}",
            args.big_threshold
        ),
        Some(corpus_digest(&corpus)),
    );
    let mut buf = Vec::new();
    report::write_sensitivity(&mut buf, &manifest.lines(), &result).map_err(anyhow::Error::from)?;
    Ok(buf)
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<Vec<u8>, CliError> {
    if !(0.0..=1.0).contains(&args.coverage_target) {
        return Err(CliError::Usage(
            "--coverage-target must lie in [0, 1]".into(),
        ));
    }
    let generated = synth::generate(&args.spec()).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(path) = &args.registry_out {
        let mut text = String::new();
        for s in generated.corpus.registry() {
            text.push_str(s);
            text.push('\n');
        }
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(generated.corpus.to_jsonl().into_bytes())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (bytes, out) = match &cli.command {
        Command::Compute(a) => (cmd_compute(a)?, a.out.as_deref()),
        Command::Stats(a) => (cmd_stats(a)?, a.out.as_deref()),
        Command::Sensitivity(a) => (cmd_sensitivity(a)?, a.out.as_deref()),
        Command::Generate(a) => (cmd_generate(a)?, a.out.as_deref()),
    };
    emit(out, &bytes)?;
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
