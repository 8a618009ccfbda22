use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge {edge} has invalid weight {weight} (weights must be finite and positive)")]
    InvalidWeight { edge: usize, weight: f64 },

    #[error("cut side must be a nonempty proper subset of the vertices")]
    InvalidCut,

    #[error("length mismatch for {what}: expected {expected}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("vertex count mismatch: {left} vs {right}")]
    VertexCountMismatch { left: usize, right: usize },

    #[error("edge {edge} has invalid strength label {label}")]
    InvalidLabel { edge: usize, label: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("source and sink must be distinct vertices (got {0} twice)")]
    SameTerminals(usize),

    #[error("graph has {n} vertices, above the oracle limit of {cap}")]
    SizeCap { n: usize, cap: usize },

    #[error("strength estimation made no progress at k = {k}")]
    NoProgress { k: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
