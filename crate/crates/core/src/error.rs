use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
    #[error("{file}: duplicate name `{name}`")]
    Duplicate { file: String, name: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TagError {
    #[error("empty tag")]
    Empty,
    #[error("duplicate tag `{0}`")]
    Duplicate(String),
    #[error("cannot read tag list {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchError {
    #[error("empty named entity")]
    EmptyEntity,
    #[error("partial similarity threshold must be in 1..=100, got {0}")]
    InvalidThreshold(u8),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimilarityError {
    #[error("partial similarity needs a non-empty shorter operand")]
    EmptyOperand,
}

#[derive(Debug, Error)]
pub enum StandoffError {
    #[error("document/spans desynchronized: checksum {found} does not match text checksum {expected}")]
    ChecksumMismatch { expected: String, found: String },
    #[error("span {index} ({start}..{end}) is out of range for a text of {len} characters")]
    OutOfRange {
        index: usize,
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("span {index} overlaps span {other}")]
    Overlap { index: usize, other: usize },
    #[error("annotation {index}: surface `{found}` does not match text `{expected}`")]
    SurfaceMismatch {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("invalid annotation {index}: {message}")]
    Invalid { index: usize, message: String },
    #[error("malformed inline annotation at character {0}")]
    MalformedInline(usize),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Match(#[from] MatchError),
}

#[derive(Debug, Error)]
pub enum AugmentError {
    #[error("annotation spans {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("annotation {index} ({start}..{end}) is out of range")]
    OutOfRange {
        index: usize,
        start: usize,
        end: usize,
    },
    #[error("the replacement name pool is empty")]
    EmptyPool,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Error)]
pub enum WikiError {
    #[error("no character section found")]
    NoCharacterSection,
    #[error("character section `{0}` lists no names")]
    EmptySection(String),
    #[error("empty article title")]
    EmptyTitle,
    #[error("article `{title}` not found (HTTP {status})")]
    NotFound { title: String, status: u16 },
    #[error("HTTP {status} while fetching `{title}`")]
    Http { title: String, status: u16 },
    #[error("request for `{title}` failed: {message}")]
    Transport { title: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("gold and predicted annotations refer to different texts")]
    TextMismatch,
}
