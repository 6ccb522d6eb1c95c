use thiserror::Error;

use crate::graph::Diagnostic;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: matrix is not square ({rows}x{cols})")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("{op}: shape mismatch {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op}: index {index} out of range (size {size})")]
    IndexOutOfRange {
        op: &'static str,
        index: usize,
        size: usize,
    },

    /// A matrix that had to be inverted was singular. The string names which one.
    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("invalid graph: {}", format_diagnostics(.0))]
    InvalidGraph(Vec<Diagnostic>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error(
        "Kasteleyn sign system is infeasible (face {face}); the rotation system is not planar"
    )]
    InfeasibleSigns { face: usize },

    #[error("{what} exceeds the enumeration cap of {cap}")]
    CapExceeded { what: &'static str, cap: u64 },

    #[error("{what}: {got} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("edges must be distinct: `{0}` repeated")]
    DuplicateEdges(String),

    #[error("move precondition violated: {0}")]
    MovePrecondition(String),

    #[error("operation not supported: {0}")]
    Unsupported(String),

    /// The Kasteleyn determinant did not reproduce the enumerated partition function.
    #[error(
        "certificate mismatch: |det K| = {det} but the enumerated partition function is {oracle}"
    )]
    CertificateMismatch { det: String, oracle: String },
}

fn format_diagnostics(d: &[Diagnostic]) -> String {
    d.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
