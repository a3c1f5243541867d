use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("system has no terms left after merging duplicate exponents")]
    EmptySystem,

    #[error("scale factor alpha must be nonzero")]
    DegenerateScale,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("abnormal array: term(s) {terms:?} appear in every column; no coefficient matrix recipe exists")]
    AbnormalArray { terms: Vec<usize> },

    #[error("array is not connected; components {components:?} describe separate integrals")]
    Disconnected { components: Vec<Vec<usize>> },

    #[error("array fails validation: condition(s) {0} not satisfied")]
    ArrayRejected(String),

    #[error("internal contradiction: {0}")]
    Contradiction(String),

    #[error("limit exceeded: {0}")]
    Limit(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite state at step {step}")]
    NonFinite { step: usize },
}

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn dimension(context: impl Into<String>, expected: usize, found: usize) -> Self {
        Error::Dimension {
            context: context.into(),
            expected,
            found,
        }
    }
}
