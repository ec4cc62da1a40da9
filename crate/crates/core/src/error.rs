use thiserror::Error;

/// Errors raised by the exact arithmetic, height and basis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({left} vs {right})")]
    FieldMismatch { left: String, right: String },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("rank deficient: expected rank {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("height of the zero vector is undefined")]
    ZeroVector,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{kind} at line {line}, column {column}: {message}")]
    Parse {
        kind: ParseErrorKind,
        line: usize,
        column: usize,
        message: String,
    },
}

/// Classes of input-format failures; each maps to a distinct error code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    MalformedHeader,
    NotSquarefree,
    EntryCount,
    BadEntry,
}

impl ParseErrorKind {
    pub fn code(self) -> &'static str {
        match self {
            ParseErrorKind::MalformedHeader => "E_HEADER",
            ParseErrorKind::NotSquarefree => "E_SQUAREFREE",
            ParseErrorKind::EntryCount => "E_COUNT",
            ParseErrorKind::BadEntry => "E_ENTRY",
        }
    }
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let text = match self {
            ParseErrorKind::MalformedHeader => "malformed header",
            ParseErrorKind::NotSquarefree => "non-squarefree field parameter",
            ParseErrorKind::EntryCount => "entry count mismatch",
            ParseErrorKind::BadEntry => "unparsable entry",
        };
        write!(f, "{} [{}]", text, self.code())
    }
}

impl Error {
    /// True for failures caused by malformed input rather than by a violated
    /// mathematical precondition.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::InvalidField(_) | Error::FieldMismatch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
