use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input element {index} is not finite")]
    NonFiniteInput { index: usize },

    #[error("row index {0} out of range (expected 0..8)")]
    RowOutOfRange(usize),

    #[error("grid needs at least 2 samples, got {0}")]
    DegenerateGrid(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("temporal frequency {0} outside (0, pi]")]
    InvalidOmegaT(f64),

    #[error("sample {re} + {im}j outside the open quantizer range (-1, 1)")]
    QuantizerRange { re: f64, im: f64 },

    #[error(
        "quadrature did not converge: {nodes} nodes, doubling delta {delta:e} > tolerance {tolerance:e}"
    )]
    QuadratureDiverged { nodes: usize, delta: f64, tolerance: f64 },

    #[error("factorization mismatch at ({row}, {col}): expected {expected}, got {got}")]
    FactorizationMismatch { row: usize, col: usize, expected: String, got: String },

    #[error("sample file: {0}")]
    SampleFile(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
