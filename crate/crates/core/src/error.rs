use std::fmt;

/// Location of a syntax problem inside a `.gog` file (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at {span}: {message}")]
    Parse { span: Span, message: String },

    #[error("{0}")]
    Input(String),

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("capacity exceeded: {what} (limit {limit})")]
    Capacity { what: String, limit: usize },

    #[error("index not established for subgroup of `{vertex}`: {detail}")]
    IndexNotEstablished { vertex: String, detail: String },

    #[error("tree not locally finite: edge `{edge}` has infinite index in `{vertex}`")]
    InfiniteIndex { edge: String, vertex: String },

    #[error("embedding inconsistent on edge `{edge}`: {detail}")]
    Embedding { edge: String, detail: String },

    #[error("invalid graph of groups: {0}")]
    Graph(String),

    #[error("geodesic recognizer mismatch on word {word:?}: automaton says {accepted}, metric says {geodesic}")]
    ConeMismatch {
        word: Vec<u16>,
        accepted: bool,
        geodesic: bool,
    },

    #[error("departure property violated: {0}")]
    Departure(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            span: Span { line, column },
            message: message.into(),
        }
    }

    /// True for problems caused by the caller's input rather than a failed check.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::ConeMismatch { .. } | Error::Departure(_) | Error::Internal(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
