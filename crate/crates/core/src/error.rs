use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: duplicate paper id `{id}`")]
    DuplicatePaperId { line: usize, id: String },

    #[error("paper `{paper_id}`: reference #{position} has no id, src or yr")]
    EmptyReference { paper_id: String, position: usize },

    #[error(
        "paper `{paper_id}`: reference to `{target_id}` claims {field} `{claimed}` but the record has `{actual}`"
    )]
    ReferenceMismatch {
        paper_id: String,
        target_id: String,
        field: &'static str,
        claimed: String,
        actual: String,
    },

    #[error("paper `{paper_id}`: publication year {year} outside {min}..={max}")]
    YearOutOfRange {
        paper_id: String,
        year: i32,
        min: i32,
        max: i32,
    },

    #[error("paper `{paper_id}`: empty paper id")]
    EmptyPaperId { paper_id: String },

    #[error("paper `{paper_id}`: source `{source_id}` is not in the source registry")]
    UnregisteredSource { paper_id: String, source_id: String },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("indicator `{0}` is undefined for this journal")]
    Undefined(&'static str),

    #[error("no journal with a defined database citation potential")]
    NoEligibleJournals,

    #[error("median database citation potential must be positive, got {0}")]
    NonPositiveMedian(f64),

    #[error("empty input")]
    EmptyInput,

    #[error("value {0} is not a finite non-negative number")]
    InvalidValue(f64),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("column `{0}` holds no values")]
    AllNull(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
