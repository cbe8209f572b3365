use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("document `{0}` produced no tokens")]
    EmptyDocument(String),
    #[error("document `{doc}`: cannot tokenize line {line}: {detail}")]
    Lex { doc: String, line: usize, detail: String },
    #[error("no source files found under {0}")]
    EmptyCorpus(PathBuf),
    #[error("every term was filtered out by min_df={0}")]
    AllTermsFiltered(f64),
    #[error("NCut weighting needs at least two terms, got {0}")]
    TooFewTerms(usize),
    #[error("matrix is already weighted with {0}")]
    AlreadyWeighted(&'static str),
    #[error("matrix has no nonzero entry")]
    DegenerateMatrix,
    #[error("need at least {needed} documents, got {got}")]
    TooFewDocuments { needed: usize, got: usize },
    #[error("new documents share no term with the model vocabulary")]
    VocabularyMismatch,
    #[error("logistic regression needs two non-empty classes")]
    SingleClass,
    #[error("no valid term pair to score")]
    NoValidPairs,
    #[error("NPMI undefined for `{0}`, `{1}`")]
    UndefinedNpmi(String, String),
    #[error("requested top-{k} of {n} items")]
    KTooLarge { k: usize, n: usize },
    #[error("ranked lists are not comparable: {0}")]
    InvalidRanking(String),
    #[error("all observations are identical")]
    DegenerateSamples,
    #[error("topic {0} appears in more than one merge group")]
    MergeOverlap(usize),
    #[error("topic id {id} out of range for {k} topics")]
    TopicOutOfRange { id: usize, k: usize },
    #[error("topic {topic} has {got} documents, intruder tasks need at least {needed}")]
    TooFewDocs { topic: usize, got: usize, needed: usize },
    #[error("distance matrix has no positive spectrum")]
    DegenerateSpectrum,
    #[error("invalid distance matrix: {0}")]
    InvalidDistance(String),
    #[error("data has rank zero")]
    DegenerateData,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("missing input: {0}")]
    MissingInput(PathBuf),
    #[error("{path}:{line}: {detail}")]
    Parse { path: String, line: usize, detail: String },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl ToString, line: usize, detail: impl ToString) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            detail: detail.to_string(),
        }
    }

    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyDocument(_) => "EmptyDocument",
            Error::Lex { .. } => "LexError",
            Error::EmptyCorpus(_) => "EmptyCorpus",
            Error::AllTermsFiltered(_) => "AllTermsFiltered",
            Error::TooFewTerms(_) => "TooFewTerms",
            Error::AlreadyWeighted(_) => "AlreadyWeighted",
            Error::DegenerateMatrix => "DegenerateMatrix",
            Error::TooFewDocuments { .. } => "TooFewDocuments",
            Error::VocabularyMismatch => "VocabularyMismatch",
            Error::SingleClass => "SingleClass",
            Error::NoValidPairs => "NoValidPairs",
            Error::UndefinedNpmi(..) => "UndefinedNPMI",
            Error::KTooLarge { .. } => "KTooLarge",
            Error::InvalidRanking(_) => "InvalidRanking",
            Error::DegenerateSamples => "DegenerateSamples",
            Error::MergeOverlap(_) => "MergeOverlap",
            Error::TopicOutOfRange { .. } => "TopicOutOfRange",
            Error::TooFewDocs { .. } => "TooFewDocs",
            Error::DegenerateSpectrum => "DegenerateSpectrum",
            Error::InvalidDistance(_) => "InvalidDistance",
            Error::DegenerateData => "DegenerateData",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Config(_) => "ConfigError",
            Error::MissingInput(_) => "MissingInput",
            Error::Parse { .. } => "ParseError",
            Error::Io { .. } => "IoError",
            Error::Json(_) => "JsonError",
        }
    }
}
