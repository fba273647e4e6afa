use thiserror::Error;

/// Failure to load an external resource file.
#[derive(Debug, Error)]
pub enum ResourceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Malformed { path: String, line: usize, reason: String },
}

/// Meaning-representation parse failures. Offsets are byte offsets into the
/// input string.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MrError {
    #[error("unbalanced delimiters at byte {offset}")]
    UnbalancedDelimiters { offset: usize },
    #[error("missing dialogue act type at byte {offset}")]
    MissingActType { offset: usize },
    #[error("empty attribute at byte {offset}")]
    EmptyAttribute { offset: usize },
    #[error("unexpected input after closing parenthesis at byte {offset}")]
    TrailingInput { offset: usize },
}

#[derive(Debug, Error)]
pub enum WbmError {
    #[error("at least one reference is required")]
    EmptyReferences,
    #[error("all references are empty")]
    ZeroLengthReferences,
    #[error("n-gram order must be at least 1")]
    InvalidOrder,
    #[error(transparent)]
    Resource(#[from] ResourceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("input contains no word tokens")]
    EmptyInput,
    #[error("segment size must be at least 1")]
    InvalidSegmentSize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("samples differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("need at least 2 systems scored by both metric and humans, got {0}")]
    TooFewSystems(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("input is empty")]
    EmptyInput,
    #[error("record {id}: no references to score against")]
    MissingReferences { id: String },
    #[error("record {id}: {source}")]
    BadMr {
        id: String,
        #[source]
        source: MrError,
    },
    #[error("record {id}: rating {value} for {aspect} is outside [{min}, {max}]")]
    RatingOutOfScale {
        id: String,
        aspect: String,
        value: f64,
        min: f64,
        max: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidateError {
    #[error("input is empty")]
    EmptyInput,
    #[error("{name} = {value} is outside [0, 1]")]
    ThresholdOutOfRange { name: &'static str, value: f64 },
}
