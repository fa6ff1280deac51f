//! Numerical thresholds shared by every module.
//!
//! Relative thresholds are multiplied by a scale chosen at the call site,
//! usually `1 + ‖A‖_F` of the matrix being checked.

/// Relative Hermiticity tolerance for operators and density matrices.
pub const HERMITIAN_REL: f64 = 1e-10;

/// Absolute trace tolerance for density matrices.
pub const TRACE_ABS: f64 = 1e-10;

/// Smallest eigenvalue a density matrix may carry.
pub const DENSITY_MIN_EIG: f64 = -1e-9;

/// Eigenvalues in `[-ENTROPY_CLAMP, 0)` are treated as exact zeros by the entropy.
pub const ENTROPY_CLAMP: f64 = 1e-9;

/// The integrator aborts once a recorded state has an eigenvalue below this.
pub const POSITIVITY_ABORT: f64 = -1e-6;

/// Gram matrix deviation tolerated in `HermitianEigenSystem` and basis vectors.
pub const ORTHONORMAL_EIGEN: f64 = 1e-10;
pub const ORTHONORMAL_BASIS: f64 = 1e-8;

/// Residual contract of the general eigensolver, relative to `‖A‖_F·‖v‖₂`.
pub const EIGEN_RESIDUAL_REL: f64 = 1e-8;

/// Eigenvalues closer than this are reported as one cluster.
pub const EIGEN_CLUSTER: f64 = 1e-6;

/// A mode is stationary when `|Re λ| ≤ STATIONARY_REL·‖𝓛‖_F`.
pub const STATIONARY_REL: f64 = 1e-8;

/// Modes with `Re λ` below `-DECAY_ABS` count towards the decay gap.
pub const DECAY_ABS: f64 = 1e-8;

/// Largest eigenvector condition number accepted by spectral propagation.
pub const MAX_EIGENBASIS_CONDITION: f64 = 1e8;

/// Relative entropy-condition tolerance, scaled by `1 + Σ‖L_n‖_F²`.
pub const ENTROPY_CONDITION_REL: f64 = 1e-10;

/// Projector identities of a measurement basis.
pub const PROJECTOR_ABS: f64 = 1e-10;

/// Certification verdict threshold, scaled by `1 + max operator norm`.
pub const CERTIFY_REL: f64 = 1e-8;

/// Two columns of ℓ are degenerate when they agree to this, scaled by `1 + max|ℓ|`.
pub const DEGENERACY_REL: f64 = 1e-8;

/// Agreement required between the two algebraic forms of the decay matrix.
pub const DECAY_SELF_CHECK: f64 = 1e-12;

/// Probabilities in `[-PROBABILITY_CLAMP, 0)` are clamped to zero.
pub const PROBABILITY_CLAMP: f64 = 1e-12;

/// Probabilities must sum to one within this.
pub const PROBABILITY_SUM: f64 = 1e-10;

/// Per-step trace drift tolerated before renormalization.
pub const STEP_TRACE_DRIFT: f64 = 1e-9;

/// Entropy samples may drop by at most this when the entropy condition holds.
pub const ENTROPY_MONOTONE: f64 = 1e-8;

/// Default late-time horizon, in units of the inverse decay gap.
pub const LATE_TIME_FACTOR: f64 = 40.0;

/// Collapse check threshold on the Frobenius deviation from the predicted limit.
pub const COLLAPSE_DEVIATION: f64 = 1e-6;
