use thiserror::Error;

/// Errors surfaced by the analysis pipeline.
///
/// Per-line ingestion problems are deliberately *not* errors: malformed
/// records are counted and skipped so multi-million-line archives never
/// abort halfway through.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty group")]
    EmptyGroup,

    #[error("insufficient history for user {user_id}: {have} tweets, need at least {need}")]
    InsufficientHistory {
        user_id: String,
        have: u64,
        need: u64,
    },

    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate labels: training data must contain both classes")]
    DegenerateLabels,

    #[error("training set too small: {0} rows")]
    TooFewRows(usize),

    #[error("duplicate user id in training set: {0}")]
    DuplicateUser(String),

    #[error("prediction/gold length mismatch: {predictions} vs {gold}")]
    LengthMismatch { predictions: usize, gold: usize },

    #[error("empty seed set")]
    EmptySeeds,

    #[error("seed set must contain both stances")]
    MissingStance,

    #[error("sample size {k} exceeds labeled user count {labeled}")]
    SampleTooLarge { k: usize, labeled: usize },

    #[error("empty day window")]
    EmptyWindow,

    #[error("no volume: hashtag has zero occurrences in the window")]
    NoVolume,

    #[error("empty seminar hashtag list: nothing qualifies at the configured floor")]
    EmptySeminarList,

    #[error("user {0} has no hashtags")]
    ZeroVector(String),

    #[error("malformed {what} file at line {line}: {message}")]
    MalformedFile {
        what: &'static str,
        line: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
