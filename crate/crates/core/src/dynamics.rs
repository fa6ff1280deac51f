//! Time evolution of density matrices.
//!
//! [`integrate`] is a fixed-step classical RK4 scheme applied to `dρ/dt = 𝓛ρ`.
//! [`propagate_spectral`] expands ρ₀ in the eigenvectors of the superoperator.
//! The two share nothing beyond [`apply_liouvillian`] and the matrix kernel,
//! so each serves as an oracle for the other.

use crate::error::{Error, Result};
use crate::liouvillian::{apply_liouvillian, build_superoperator, LindbladSystem, Superoperator};
use crate::matrix::{
    condition_number, hermitian_eigen, solve_columns, ComplexMatrix, GeneralEigenSystem, C64,
};
use crate::tolerance;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (relative 1e-10), unit trace (1e-10) and
    /// positivity (minimum eigenvalue ≥ −1e-9).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let herm = matrix.hermiticity_defect();
        if herm > tolerance::HERMITIAN_REL * (1.0 + matrix.frobenius_norm()) {
            return Err(Error::InvalidDensity {
                reason: "not Hermitian",
                defect: herm,
            });
        }
        let trace = matrix.trace();
        let trace_defect = (trace - C64::new(1.0, 0.0)).norm();
        if trace_defect > tolerance::TRACE_ABS {
            return Err(Error::InvalidDensity {
                reason: "trace differs from 1",
                defect: trace_defect,
            });
        }
        let min = hermitian_eigen(&matrix)?.eigenvalues[0];
        if min < tolerance::DENSITY_MIN_EIG {
            return Err(Error::InvalidDensity {
                reason: "negative eigenvalue",
                defect: min,
            });
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = crate::matrix::vec_norm(psi);
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let psi: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&psi, &psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Hermitian part of an evolved matrix, without validation. Used for
    /// outputs of propagators whose inputs were already validated.
    pub(crate) fn from_evolved(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Per-sample health of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepDiagnostics {
    /// Largest `|Tr ρ − 1|` seen before renormalization since the previous sample.
    pub trace_defect: f64,
    /// Largest `‖ρ − ρ†‖_F` seen before re-Hermitization since the previous sample.
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
    /// Von Neumann entropy in nats.
    pub entropy: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    /// Hilbert-space dimension, kept so that empty trajectories still know it.
    pub dim: usize,
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub diagnostics: Vec<StepDiagnostics>,
}

impl Trajectory {
    /// Builds a trajectory from raw evolved matrices, measuring their defects
    /// and then re-Hermitizing and trace-normalizing each.
    pub fn from_states(dim: usize, times: Vec<f64>, raw: Vec<ComplexMatrix>) -> Result<Self> {
        if let Some(m) = raw.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: m.dim(),
            });
        }
        if times.len() != raw.len() {
            return Err(Error::Schedule(format!(
                "{} times for {} states",
                times.len(),
                raw.len()
            )));
        }
        let mut states = Vec::with_capacity(raw.len());
        let mut diagnostics = Vec::with_capacity(raw.len());
        for (&t, m) in times.iter().zip(raw) {
            let (state, trace_defect, hermiticity_defect) = correct(m);
            let (min_eigenvalue, entropy) = spectrum_diagnostics(&state, t)?;
            states.push(DensityMatrix { matrix: state });
            diagnostics.push(StepDiagnostics {
                trace_defect,
                hermiticity_defect,
                min_eigenvalue,
                entropy,
            });
        }
        Ok(Self {
            dim,
            times,
            states,
            diagnostics,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&DensityMatrix> {
        self.states.last()
    }

    /// Smallest `S(t_{i+1}) − S(t_i)` over consecutive samples; `+∞` for fewer than two.
    pub fn min_entropy_increment(&self) -> f64 {
        self.diagnostics
            .windows(2)
            .map(|w| w[1].entropy - w[0].entropy)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Re-Hermitizes and trace-normalizes, returning the defects removed.
fn correct(m: ComplexMatrix) -> (ComplexMatrix, f64, f64) {
    let herm = m.hermiticity_defect();
    let trace = m.trace();
    let trace_defect = (trace - C64::new(1.0, 0.0)).norm();
    let fixed = m.hermitian_part().scale_real(1.0 / trace.re);
    (fixed, trace_defect, herm)
}

fn spectrum_diagnostics(state: &ComplexMatrix, time: f64) -> Result<(f64, f64)> {
    let eig = hermitian_eigen(state)?;
    let min = eig.eigenvalues[0];
    if min < tolerance::POSITIVITY_ABORT {
        return Err(Error::PositivityViolation {
            time,
            min_eigenvalue: min,
        });
    }
    // between the abort threshold and the entropy clamp the entropy is
    // computed on clipped eigenvalues so the trajectory can still report it
    let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&p| p.max(0.0)).collect();
    Ok((min, entropy_from_eigenvalues(&clipped)?))
}

/// Step layout of a fixed-step run from 0 to `t_end`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    pub t_end: f64,
    /// Number of equal steps, `ceil(t_end/dt)`.
    pub steps: usize,
    /// Actual step, `t_end/steps` (equal to `dt` when `dt` divides `t_end`).
    pub step: f64,
    /// Every `stride`-th step is recorded, plus the final one.
    pub stride: usize,
}

/// Largest number of recorded samples.
pub const MAX_SAMPLES: usize = 1001;

impl Schedule {
    pub fn new(t_end: f64, dt: f64) -> Result<Self> {
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(Error::Schedule(format!(
                "t_end must be positive, got {t_end}"
            )));
        }
        if !(dt.is_finite() && dt > 0.0 && dt <= t_end) {
            return Err(Error::Schedule(format!(
                "dt must satisfy 0 < dt <= t_end, got dt = {dt}, t_end = {t_end}"
            )));
        }
        // absorb rounding in t_end/dt so that e.g. 10/1e-3 is 10000 steps
        let ratio = t_end / dt;
        let steps = ((ratio * (1.0 - 1e-12)).ceil() as usize).max(1);
        let stride = steps.div_ceil(MAX_SAMPLES - 1);
        Ok(Self {
            t_end,
            steps,
            step: t_end / steps as f64,
            stride,
        })
    }

    pub fn is_recorded(&self, step_index: usize) -> bool {
        step_index.is_multiple_of(self.stride) || step_index == self.steps
    }

    pub fn time_of(&self, step_index: usize) -> f64 {
        if step_index == self.steps {
            self.t_end
        } else {
            step_index as f64 * self.step
        }
    }

    /// Times of all recorded samples, starting at 0 and ending at `t_end`.
    pub fn sample_times(&self) -> Vec<f64> {
        (0..=self.steps)
            .filter(|&k| self.is_recorded(k))
            .map(|k| self.time_of(k))
            .collect()
    }
}

/// Default step `min(1e-2, 0.1/‖𝓛‖_F)`.
pub fn default_dt(sys: &LindbladSystem) -> f64 {
    let norm = build_superoperator(sys).norm();
    if norm > 0.0 {
        (0.1 / norm).min(1e-2)
    } else {
        1e-2
    }
}

/// Classical RK4 at fixed step. Each step's result is re-Hermitized and
/// trace-normalized; the removed defects are kept in the diagnostics.
/// Recorded states with an eigenvalue below −1e-6 abort the run.
pub fn integrate(
    sys: &LindbladSystem,
    rho0: &DensityMatrix,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    run_rk4(sys, rho0, t_end, dt, false).map(|(traj, _)| traj)
}

/// [`integrate`], also returning the smallest entropy change over single
/// steps (not just recorded samples). Costs one Hermitian eigensolve per step.
pub fn integrate_with_entropy_steps(
    sys: &LindbladSystem,
    rho0: &DensityMatrix,
    t_end: f64,
    dt: f64,
) -> Result<(Trajectory, f64)> {
    run_rk4(sys, rho0, t_end, dt, true)
}

fn run_rk4(
    sys: &LindbladSystem,
    rho0: &DensityMatrix,
    t_end: f64,
    dt: f64,
    every_step_entropy: bool,
) -> Result<(Trajectory, f64)> {
    if rho0.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: rho0.dim(),
        });
    }
    let schedule = Schedule::new(t_end, dt)?;
    let h = schedule.step;
    let capacity = schedule.steps / schedule.stride + 2;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    let mut diagnostics = Vec::with_capacity(capacity);

    let (mut rho, trace0, herm0) = correct(rho0.matrix.clone());
    let (min0, s0) = spectrum_diagnostics(&rho, 0.0)?;
    times.push(0.0);
    states.push(DensityMatrix {
        matrix: rho.clone(),
    });
    diagnostics.push(StepDiagnostics {
        trace_defect: trace0,
        hermiticity_defect: herm0,
        min_eigenvalue: min0,
        entropy: s0,
    });

    let mut worst_trace = 0.0f64;
    let mut worst_herm = 0.0f64;
    let mut last_entropy = s0;
    let mut min_increment = f64::INFINITY;
    for k in 1..=schedule.steps {
        let k1 = apply_liouvillian(sys, &rho)?;
        let k2 = apply_liouvillian(sys, &(&rho + &k1.scale_real(0.5 * h)))?;
        let k3 = apply_liouvillian(sys, &(&rho + &k2.scale_real(0.5 * h)))?;
        let k4 = apply_liouvillian(sys, &(&rho + &k3.scale_real(h)))?;
        let mut incr = k1;
        incr += &k2.scale_real(2.0);
        incr += &k3.scale_real(2.0);
        incr += &k4;
        let next = &rho + &incr.scale_real(h / 6.0);

        let (fixed, trace_defect, herm) = correct(next);
        rho = fixed;
        worst_trace = worst_trace.max(trace_defect);
        worst_herm = worst_herm.max(herm);

        if every_step_entropy && !schedule.is_recorded(k) {
            let (_, entropy) = spectrum_diagnostics(&rho, schedule.time_of(k))?;
            min_increment = min_increment.min(entropy - last_entropy);
            last_entropy = entropy;
        }
        if schedule.is_recorded(k) {
            let t = schedule.time_of(k);
            let (min_eigenvalue, entropy) = spectrum_diagnostics(&rho, t)?;
            min_increment = min_increment.min(entropy - last_entropy);
            last_entropy = entropy;
            times.push(t);
            states.push(DensityMatrix {
                matrix: rho.clone(),
            });
            diagnostics.push(StepDiagnostics {
                trace_defect: worst_trace,
                hermiticity_defect: worst_herm,
                min_eigenvalue,
                entropy,
            });
            worst_trace = 0.0;
            worst_herm = 0.0;
        }
    }
    let traj = Trajectory {
        dim: sys.dim(),
        times,
        states,
        diagnostics,
    };
    Ok((traj, min_increment))
}

/// Eigen-expansion of a superoperator, reusable across many times.
#[derive(Clone, Debug)]
pub struct SpectralPropagator {
    dim: usize,
    eigen: GeneralEigenSystem,
    condition: f64,
}

impl SpectralPropagator {
    /// Refuses eigenbases with condition number above 1e8.
    pub fn new(sup: &Superoperator) -> Result<Self> {
        let eigen = sup.eigen()?;
        let condition = condition_number(&eigen.eigenvectors);
        if condition.is_nan() || condition > tolerance::MAX_EIGENBASIS_CONDITION {
            return Err(Error::IllConditioned { condition });
        }
        Ok(Self {
            dim: sup.dim(),
            eigen,
            condition,
        })
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn eigen(&self) -> &GeneralEigenSystem {
        &self.eigen
    }

    /// Coefficients of `vec(ρ₀)` in the eigenvector basis.
    fn coefficients(&self, rho0: &DensityMatrix) -> Result<Vec<C64>> {
        if rho0.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho0.dim(),
            });
        }
        Ok(solve_columns(
            &self.eigen.eigenvectors,
            &rho0.matrix.vec_columns(),
        ))
    }

    fn combine(&self, weights: impl Iterator<Item = C64>) -> Result<ComplexMatrix> {
        let n = self.dim * self.dim;
        let mut acc = vec![C64::new(0.0, 0.0); n];
        for (w, v) in weights.zip(&self.eigen.eigenvectors) {
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(v) {
                *a += w * x;
            }
        }
        ComplexMatrix::unvec_columns(self.dim, &acc)
    }

    /// Raw `Σ_k c_k e^{λ_k t} v_k`, without re-Hermitization.
    pub fn propagate_raw(&self, rho0: &DensityMatrix, t: f64) -> Result<ComplexMatrix> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::Schedule(format!(
                "time must be non-negative, got {t}"
            )));
        }
        if t == 0.0 {
            // the expansion reproduces ρ₀ only up to round-off
            self.coefficients(rho0)?;
            return Ok(rho0.matrix().clone());
        }
        let coeffs = self.coefficients(rho0)?;
        self.combine(
            coeffs
                .iter()
                .zip(&self.eigen.eigenvalues)
                .map(|(c, l)| c * (l * t).exp()),
        )
    }

    pub fn propagate(&self, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_evolved(self.propagate_raw(rho0, t)?))
    }

    /// Spectral projection of ρ₀ onto the modes with `|Re λ| ≤ 1e-8·‖𝓛‖_F`.
    /// Refuses if any of those modes has a non-zero imaginary part.
    pub fn stationary_projection(&self, rho0: &DensityMatrix) -> Result<DensityMatrix> {
        let tol = tolerance::STATIONARY_REL * self.eigen.matrix_norm;
        let stationary: Vec<bool> = self
            .eigen
            .eigenvalues
            .iter()
            .map(|l| l.re.abs() <= tol)
            .collect();
        let max_imag = self
            .eigen
            .eigenvalues
            .iter()
            .zip(&stationary)
            .filter(|(_, &s)| s)
            .map(|(l, _)| l.im.abs())
            .fold(0.0, f64::max);
        if max_imag > tol {
            return Err(Error::OscillatoryStationary { max_imag });
        }
        let coeffs = self.coefficients(rho0)?;
        let raw = self.combine(coeffs.iter().zip(&stationary).map(|(&c, &s)| {
            if s {
                c
            } else {
                C64::new(0.0, 0.0)
            }
        }))?;
        Ok(DensityMatrix::from_evolved(raw))
    }
}

/// `ρ(t) = Σ_k c_k e^{λ_k t} v_k` with `vec(ρ₀) = Σ_k c_k v_k`.
pub fn propagate_spectral(
    sup: &Superoperator,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    SpectralPropagator::new(sup)?.propagate(rho0, t)
}

/// Late-time limit of ρ(t), from the stationary modes of 𝓛.
pub fn asymptotic_state(sys: &LindbladSystem, rho0: &DensityMatrix) -> Result<DensityMatrix> {
    if rho0.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: rho0.dim(),
        });
    }
    SpectralPropagator::new(&build_superoperator(sys))?.stationary_projection(rho0)
}

/// `−Σ p ln p` over the eigenvalues of ρ, in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_from_eigenvalues(&hermitian_eigen(&rho.matrix)?.eigenvalues)
}

/// `−Σ p ln p` with `0 ln 0 = 0`. Values in `[−1e-9, 0)` count as zero;
/// anything more negative is an error.
pub fn entropy_from_eigenvalues(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &p in eigenvalues {
        if p < -tolerance::ENTROPY_CLAMP {
            return Err(Error::InvalidDensity {
                reason: "negative eigenvalue",
                defect: p,
            });
        }
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    Ok(s)
}
