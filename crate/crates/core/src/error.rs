use std::fmt;

use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// The variants fall into three groups that the command line maps onto exit
/// codes: usage/input problems, answers that are negative by nature (an oracle
/// found no separator, a cap was exceeded), and invariant violations, which
/// always point at a bug rather than at the input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what}: enumeration needs {required} steps, budget is {budget}")]
    BudgetExceeded {
        what: String,
        required: String,
        budget: u64,
    },

    #[error("decomposition failed at {frame}: {reason}")]
    DecompositionFailure { frame: Frame, reason: String },

    #[error("ball cover of size {size} exceeds cap {cap} at {frame}")]
    CapExceeded { frame: Frame, size: usize, cap: u64 },

    #[error("invariant violated: {what} (witness: {witness})")]
    InvariantViolation { what: String, witness: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn violation(what: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::InvariantViolation {
            what: what.into(),
            witness: witness.into(),
        }
    }
}

/// A recursion frame of the decomposition builders, kept small enough to
/// print in an error message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub depth: usize,
    pub separator: Vec<usize>,
    pub component: Vec<usize>,
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "frame(depth {}, |S| = {}, U = {})",
            self.depth,
            self.separator.len(),
            abbreviate(&self.component)
        )
    }
}

fn abbreviate(set: &[usize]) -> String {
    if set.len() <= 8 {
        format!("{set:?}")
    } else {
        format!("{:?}.. ({} vertices)", &set[..8], set.len())
    }
}
