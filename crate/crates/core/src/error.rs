use thiserror::Error;

pub type Result<T> = std::result::Result<T, QtomoError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QtomoError {
    #[error("unsupported matrix dimension {0} (only 2 and 4 are supported)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        expected: usize,
        found: usize,
        row: usize,
    },
    #[error("non-finite value")]
    NonFinite,
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("{name} = {value} outside [{min}, {max}]")]
    AngleOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("matrix is not a valid {dim}x{dim} density matrix")]
    NotDensity { dim: usize },
    #[error("Stokes vector must have s0 = 1, got {0}")]
    Unnormalized(f64),
    #[error("Bloch vector norm {0} exceeds 1")]
    OutsideBlochBall(f64),
    #[error("expectation value has imaginary residue {0}")]
    NonRealExpectation(f64),
    #[error("shot count must be at least 1, got {0}")]
    InvalidShots(u64),
    #[error("payoff entries must be +1 or -1 for sampling, got {0}")]
    NonUnitPayoff(f64),
}
