use std::fmt;

use crate::indexvec::IndexShape;

pub type Result<T> = std::result::Result<T, Error>;

/// Why a computation declined to answer rather than returning a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refusal {
    /// The lattice meets the nonnegative orthant nontrivially, so fibers are infinite.
    InfiniteFiber,
    /// The chosen varying coordinates meet some facet more than once.
    NotIndependent { facet: Vec<usize> },
}

impl Refusal {
    /// Stable machine-readable tag.
    pub fn reason(&self) -> &'static str {
        match self {
            Refusal::InfiniteFiber => "infinite-fiber",
            Refusal::NotIndependent { .. } => "not-independent",
        }
    }
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refusal::InfiniteFiber => {
                write!(f, "lattice contains a nonzero nonnegative vector; fibers are infinite")
            }
            Refusal::NotIndependent { facet } => {
                write!(f, "varying coordinates meet facet {facet:?} more than once")
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("shape mismatch: {0} vs {1}")]
    ShapeMismatch(IndexShape, IndexShape),
    #[error("index {index:?} outside shape {shape}")]
    IndexOutOfRange { index: Vec<u32>, shape: IndexShape },
    #[error("operation undefined on the zero vector")]
    ZeroVector,
    #[error("term orders compare nonnegative vectors only")]
    NegativeVector,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u64 },
    #[error("refused: {0}")]
    Refused(Refusal),
    #[error("entry does not fit in a machine word")]
    Overflow,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}
