use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must have dimension >= 1 and exactly dim² entries (dim {dim}, {len} entries)")]
    BadShape { dim: usize, len: usize },

    #[error("matrix is not Hermitian: ‖A − A†‖_F = {defect:e} exceeds {tolerance:e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("eigensolver did not converge (size {size})")]
    NoConvergence {
        size: usize,
        /// Residuals of whatever pairs were available when the solver gave up.
        partial_residuals: Vec<f64>,
    },

    #[error("eigenpair residual {residual:e} exceeds the contract bound {bound:e}")]
    ResidualContract { residual: f64, bound: f64 },

    #[error("invalid density matrix: {reason} (defect {defect:e})")]
    InvalidDensity { reason: &'static str, defect: f64 },

    #[error("positivity violated at t = {time}: minimum eigenvalue {min_eigenvalue:e}")]
    PositivityViolation { time: f64, min_eigenvalue: f64 },

    #[error("eigenvector basis is ill-conditioned (condition number {condition:e}); use time integration instead")]
    IllConditioned { condition: f64 },

    #[error("stationary subspace contains oscillating modes (max |Im λ| = {max_imag:e}); no single late-time limit")]
    OscillatoryStationary { max_imag: f64 },

    #[error("eigenmatrix has zero norm")]
    ZeroNorm,

    #[error("empty mode list")]
    EmptyModes,

    #[error("basis vectors are not orthonormal: Gram defect {defect:e}")]
    NotOrthonormal { defect: f64 },

    #[error("malformed class partition: {0}")]
    Partition(String),

    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error("invalid negative probability {value:e} at index {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, not 1")]
    ProbabilitySum { sum: f64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid field `{field}`: {message} (defect {defect:e})")]
    InvalidField {
        field: String,
        message: String,
        defect: f64,
    },

    #[error("trajectory format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
