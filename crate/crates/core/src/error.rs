use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = VcError> = std::result::Result<T, E>;

/// Group axiom reported by [`crate::FiniteGroup::from_cayley_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Shape,
    LatinSquare,
    Identity,
    Inverse,
    Associativity,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Axiom::Shape => "shape",
            Axiom::LatinSquare => "latin square",
            Axiom::Identity => "identity",
            Axiom::Inverse => "inverse",
            Axiom::Associativity => "associativity",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum VcError {
    #[error("invalid group order {order}: {reason}")]
    InvalidOrder { order: usize, reason: &'static str },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("cayley table violates {axiom} axiom (witness {witness:?})")]
    Validation { axiom: Axiom, witness: [usize; 3] },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("VC-dimension of an empty family is undefined")]
    UndefinedFamily,

    #[error("search budget of {budget} nodes exhausted")]
    Resource { budget: u64 },

    #[error("search deadline passed after {nodes} nodes")]
    Deadline { nodes: u64 },

    #[error("certified bound violated: {0}")]
    BoundViolated(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl VcError {
    /// Short stable name used in error markers of experiment records.
    pub fn code(&self) -> &'static str {
        match self {
            VcError::InvalidOrder { .. } => "invalid-order",
            VcError::Capacity(_) => "capacity",
            VcError::Validation { .. } => "validation",
            VcError::Dimension { .. } => "dimension",
            VcError::Precondition(_) => "precondition",
            VcError::Domain(_) => "domain",
            VcError::UndefinedFamily => "undefined-family",
            VcError::Resource { .. } => "resource",
            VcError::Deadline { .. } => "deadline",
            VcError::BoundViolated(_) => "bound-violated",
            VcError::Parse(_) => "parse",
            VcError::Io { .. } => "io",
            VcError::Csv { .. } => "csv",
            VcError::Json(_) => "json",
        }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        VcError::Precondition(msg.into())
    }

    pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
        if expected == actual {
            Ok(())
        } else {
            Err(VcError::Dimension { expected, actual })
        }
    }
}
