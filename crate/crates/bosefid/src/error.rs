use thiserror::Error;

/// Library-wide error type.
///
/// The CLI maps each variant class to a distinct exit code, so the kind of a
/// failure is part of the public contract.
#[derive(Debug, Error)]
pub enum Error {
    /// Input failed structural validation (shape, norm, unitarity, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// Mismatched dimensions between otherwise valid objects.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A configurable size guard was exceeded.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// The detector model annihilates the state, so no probability can be
    /// postselected.
    #[error("degenerate detection: {0}")]
    DegenerateDetection(String),

    /// The requested estimator has no usable signal (e.g. vanishing
    /// classical bunched probability).
    #[error("unestimable: {0}")]
    Unestimable(String),

    /// A quantity violated an internal consistency guarantee by more than
    /// numerical tolerance. This signals an implementation bug, not bad
    /// input.
    #[error("consistency violation: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code associated with this error class.
    ///
    /// 2 = validation, 3 = consistency violation, 4 = size limit.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeLimit(_) => 4,
            Error::Consistency(_) => 3,
            _ => 2,
        }
    }

    /// Short machine-readable tag for structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Validation(_) => "validation",
            Error::Dimension(_) => "dimension",
            Error::SizeLimit(_) => "size-limit",
            Error::DegenerateDetection(_) => "degenerate-detection",
            Error::Unestimable(_) => "unestimable",
            Error::Consistency(_) => "consistency-violation",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
