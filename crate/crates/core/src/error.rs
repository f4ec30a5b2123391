use thiserror::Error;

/// Validation failures for intersection array literals.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrayError {
    #[error("malformed array literal: {0}")]
    Syntax(String),
    #[error("array has no entries")]
    Empty,
    #[error("b has {b_len} entries but c has {c_len}")]
    LengthMismatch { b_len: usize, c_len: usize },
    #[error("{name}_{index} must be positive")]
    NonPositive { name: &'static str, index: usize },
    #[error("c_1 must equal 1, got {0}")]
    FirstCNotOne(u64),
    #[error("monotonicity violated: c_{index} < c_{}", index - 1)]
    CNotMonotone { index: usize },
    #[error("monotonicity violated: b_{index} > b_{}", index - 1)]
    BNotMonotone { index: usize },
    #[error("a_{index} = k - b_{index} - c_{index} is negative")]
    NegativeA { index: usize },
}

impl ArrayError {
    /// Name of the violated invariant, stable across versions.
    pub fn invariant(&self) -> &'static str {
        match self {
            ArrayError::Syntax(_) => "syntax",
            ArrayError::Empty | ArrayError::LengthMismatch { .. } => "shape",
            ArrayError::NonPositive { .. } => "positivity",
            ArrayError::FirstCNotOne(_) => "c1-equals-one",
            ArrayError::CNotMonotone { .. } | ArrayError::BNotMonotone { .. } => "monotonicity",
            ArrayError::NegativeA { .. } => "nonnegative-a",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("characteristic polynomial is not squarefree (repeated eigenvalue)")]
    NotSquarefree,
    #[error("precision {precision} not reached within {cap} bisection steps")]
    PrecisionNotReached { precision: String, cap: usize },
    #[error("precision must be positive")]
    BadPrecision,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("generation ceiling of {cap} candidates exceeded")]
    ResourceCap { cap: u64 },
    #[error("invalid constraints: {0}")]
    InvalidConstraints(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("preset {0} needs a t-cap for the K_{{t,t,t}} family")]
    MissingTCap(String),
    #[error("golden file {name}, line {line}: {message}")]
    Golden {
        name: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: array {array} duplicates an earlier record")]
    Duplicate { line: usize, array: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("diameter must be at least 2, got {0}")]
    Diameter(usize),
    #[error("alpha must lie strictly between 0 and 1")]
    Alpha,
    #[error("{0}")]
    Domain(String),
}
