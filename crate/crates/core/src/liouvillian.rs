//! The Lindblad generator, its matrix realization and its spectrum.
//!
//! The superoperator uses column-stacking vectorization, for which
//! `vec(AXB) = (Bᵀ ⊗ A) vec(X)`. With that convention
//!
//! ```text
//! 𝓛 = −i (I ⊗ H − Hᵀ ⊗ I)
//!     + Σ_n [ conj(L_n) ⊗ L_n − ½ I ⊗ L_n†L_n − ½ (L_n†L_n)ᵀ ⊗ I ]
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{commutator, general_eigen, ComplexMatrix, GeneralEigenSystem, C64, I, ZERO};
use crate::tolerance;

/// A Hamiltonian plus jump operators, all constant in time.
#[derive(Clone, Debug)]
pub struct LindbladSystem {
    hamiltonian: ComplexMatrix,
    jumps: Vec<ComplexMatrix>,
    /// `L_n†L_n`, cached.
    jump_products: Vec<ComplexMatrix>,
}

impl LindbladSystem {
    pub fn new(hamiltonian: ComplexMatrix, jumps: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = hamiltonian.dim();
        let defect = hamiltonian.hermiticity_defect();
        let tolerance = tolerance::HERMITIAN_REL * (1.0 + hamiltonian.frobenius_norm());
        if defect > tolerance {
            return Err(Error::NotHermitian { defect, tolerance });
        }
        for l in &jumps {
            if l.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: l.dim(),
                });
            }
        }
        let jump_products = jumps.iter().map(|l| &l.adjoint() * l).collect();
        Ok(Self {
            hamiltonian,
            jumps,
            jump_products,
        })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[ComplexMatrix] {
        &self.jumps
    }
}

/// `𝓛v = −i[H, v] + Σ_n (L_n v L_n† − ½ L_n†L_n v − ½ v L_n†L_n)`.
pub fn apply_liouvillian(sys: &LindbladSystem, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut out = commutator(&sys.hamiltonian, v)?.scale(-I);
    for (l, ldl) in sys.jumps.iter().zip(&sys.jump_products) {
        out += &(&(l * v) * &l.adjoint());
        out -= &(ldl * v).scale_real(0.5);
        out -= &(v * ldl).scale_real(0.5);
    }
    Ok(out)
}

/// The d²×d² matrix of 𝓛 acting on column-stacked matrices.
#[derive(Clone, Debug)]
pub struct Superoperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    /// Wraps an arbitrary d²×d² matrix. Mostly useful for testing propagation
    /// against generators that are not of Lindblad form.
    pub fn from_matrix(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: matrix.dim(),
            });
        }
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `‖𝓛‖_F` of the matrix realization.
    pub fn norm(&self) -> f64 {
        self.matrix.frobenius_norm()
    }

    pub fn apply(&self, v: &ComplexMatrix) -> Result<ComplexMatrix> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        ComplexMatrix::unvec_columns(self.dim, &self.matrix.mat_vec(&v.vec_columns()))
    }

    /// `‖vec(I)ᴴ 𝓛‖₂`, zero for a trace-preserving generator.
    pub fn trace_preservation_defect(&self) -> f64 {
        let id = ComplexMatrix::identity(self.dim).vec_columns();
        crate::matrix::vec_norm(&self.matrix.vec_mat(&id))
    }

    pub fn eigen(&self) -> Result<GeneralEigenSystem> {
        general_eigen(&self.matrix)
    }
}

pub fn build_superoperator(sys: &LindbladSystem) -> Superoperator {
    let d = sys.dim();
    let id = ComplexMatrix::identity(d);
    let h = &sys.hamiltonian;
    let mut matrix = (&id.kron(h) - &h.transpose().kron(&id)).scale(-I);
    for (l, ldl) in sys.jumps.iter().zip(&sys.jump_products) {
        matrix += &l.conj().kron(l);
        matrix -= &id.kron(ldl).scale_real(0.5);
        matrix -= &ldl.transpose().kron(&id).scale_real(0.5);
    }
    Superoperator { dim: d, matrix }
}

/// One eigenpair of 𝓛 with the eigenvector reshaped into a d×d matrix.
#[derive(Clone, Debug)]
pub struct SpectralMode {
    pub eigenvalue: C64,
    /// Unit Frobenius norm; the largest-modulus entry is real and positive.
    pub eigenmatrix: ComplexMatrix,
    /// `‖𝓛v − λv‖_F`, with 𝓛 applied term by term.
    pub residual: f64,
}

/// All d² modes of 𝓛, sorted by descending `Re λ`.
pub fn spectrum(sys: &LindbladSystem) -> Result<Vec<SpectralMode>> {
    let sup = build_superoperator(sys);
    let eig = sup.eigen()?;
    eig.eigenvalues
        .iter()
        .zip(&eig.eigenvectors)
        .map(|(&eigenvalue, vector)| {
            let mut eigenmatrix = ComplexMatrix::unvec_columns(sys.dim(), vector)?;
            canonicalize(&mut eigenmatrix)?;
            let lv = apply_liouvillian(sys, &eigenmatrix)?;
            let residual = (&lv - &eigenmatrix.scale(eigenvalue)).frobenius_norm();
            Ok(SpectralMode {
                eigenvalue,
                eigenmatrix,
                residual,
            })
        })
        .collect()
}

/// Unit Frobenius norm, phase chosen so the first largest-modulus entry is real positive.
fn canonicalize(v: &mut ComplexMatrix) -> Result<()> {
    let norm = v.frobenius_norm();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let mut scaled = v.scale_real(norm.recip());
    let biggest = scaled.max_abs();
    let pivot = scaled
        .as_slice()
        .iter()
        .find(|z| z.norm() >= biggest * (1.0 - 1e-12))
        .copied()
        .unwrap_or(ZERO);
    if pivot != ZERO {
        let phase = pivot.conj() / pivot.norm();
        scaled = scaled.scale(phase);
        // the pivot is real positive up to rounding; make it exact
        let idx = scaled
            .as_slice()
            .iter()
            .position(|z| z.norm() >= biggest * (1.0 - 1e-12))
            .unwrap_or(0);
        let (i, j) = (idx / scaled.dim(), idx % scaled.dim());
        scaled[(i, j)] = C64::new(scaled[(i, j)].norm(), 0.0);
    }
    *v = scaled;
    Ok(())
}

/// `‖Σ_n L_n†L_n − Σ_n L_n L_n†‖_F`.
pub fn entropy_condition_defect(sys: &LindbladSystem) -> f64 {
    let mut balance = ComplexMatrix::zeros(sys.dim());
    for (l, ldl) in sys.jumps.iter().zip(&sys.jump_products) {
        balance += ldl;
        balance -= &(l * &l.adjoint());
    }
    balance.frobenius_norm()
}

/// Whether the entropy-nondecrease condition holds within
/// `1e-10·(1 + Σ‖L_n‖_F²)`.
pub fn entropy_condition_holds(sys: &LindbladSystem) -> bool {
    let scale: f64 = sys.jumps.iter().map(|l| l.frobenius_norm().powi(2)).sum();
    entropy_condition_defect(sys) <= tolerance::ENTROPY_CONDITION_REL * (1.0 + scale)
}

/// Right-hand sides of the real/imaginary eigenvalue identities, each
/// divided by `Tr(v†v)`, and their worst deviation from the mode's eigenvalue.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IdentityCheck {
    pub rhs_real: f64,
    pub rhs_imag: f64,
    pub max_deviation: f64,
}

/// Evaluates
///
/// ```text
/// Tr(v†v) Re λ = −½ Tr Σ_n [v, L_n†]†[v, L_n†] − ½ Tr(v v† Σ_n (L_n†L_n − L_n L_n†))
/// Tr(v†v) Im λ = Im Tr Σ_n L_n v†[v, L_n†] − Tr(v†[H, v])
/// ```
///
/// for the mode's eigenmatrix and compares with its eigenvalue.
pub fn eigenvalue_identity_check(
    sys: &LindbladSystem,
    mode: &SpectralMode,
) -> Result<IdentityCheck> {
    let v = &mode.eigenmatrix;
    if v.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: v.dim(),
        });
    }
    let norm_sq = v.frobenius_norm().powi(2);
    if norm_sq == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let vd = v.adjoint();
    let mut balance = ComplexMatrix::zeros(sys.dim());
    let mut commutator_sq = 0.0;
    let mut imag_dissipative = ZERO;
    for (l, ldl) in sys.jumps.iter().zip(&sys.jump_products) {
        let ld = l.adjoint();
        let c = commutator(v, &ld)?;
        commutator_sq += c.frobenius_norm().powi(2);
        imag_dissipative += (&(l * &vd) * &c).trace();
        balance += ldl;
        balance -= &(l * &ld);
    }
    let vvd_balance = (&(v * &vd) * &balance).trace().re;
    let h_term = (&vd * &commutator(&sys.hamiltonian, v)?).trace().re;

    let rhs_real = (-0.5 * commutator_sq - 0.5 * vvd_balance) / norm_sq;
    let rhs_imag = (imag_dissipative.im - h_term) / norm_sq;
    let max_deviation = (rhs_real - mode.eigenvalue.re)
        .abs()
        .max((rhs_imag - mode.eigenvalue.im).abs());
    Ok(IdentityCheck {
        rhs_real,
        rhs_imag,
        max_deviation,
    })
}

/// Smallest `|Re λ|` among decaying modes (`Re λ < −1e-8`); `+∞` when every
/// mode is stationary.
pub fn decay_gap(modes: &[SpectralMode]) -> Result<f64> {
    if modes.is_empty() {
        return Err(Error::EmptyModes);
    }
    Ok(modes
        .iter()
        .map(|m| m.eigenvalue.re)
        .filter(|&re| re < -tolerance::DECAY_ABS)
        .map(f64::abs)
        .fold(f64::INFINITY, f64::min))
}

/// Groups of mode indices whose eigenvalues lie within `1e-6` of each other
/// (single-linkage over the sorted spectrum). Only groups of two or more are returned.
pub fn eigenvalue_clusters(modes: &[SpectralMode]) -> Vec<Vec<usize>> {
    let n = modes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (modes[i].eigenvalue - modes[j].eigenvalue).norm() <= tolerance::EIGEN_CLUSTER {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[b] = a;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of_group: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of_group.iter().position(|&x| x == r) {
            Some(g) => groups[g].push(i),
            None => {
                root_of_group.push(r);
                groups.push(vec![i]);
            }
        }
    }
    groups.retain(|g| g.len() > 1);
    groups
}

/// Indices of modes with `Re λ ≈ 0` but `λ ≠ 0`. These keep oscillating
/// forever and leave no single late-time limit.
pub fn oscillating_stationary_modes(modes: &[SpectralMode], generator_norm: f64) -> Vec<usize> {
    let tol = tolerance::STATIONARY_REL * generator_norm;
    modes
        .iter()
        .enumerate()
        .filter(|(_, m)| m.eigenvalue.re.abs() <= tol && m.eigenvalue.im.abs() > tol)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::frobenius_inner;
    use crate::matrix::pauli::{sigma_x, sigma_y, sigma_z};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn qubit(ell: f64, h: f64) -> LindbladSystem {
        LindbladSystem::new(sigma_x().scale_real(h), vec![sigma_z().scale_real(ell)]).unwrap()
    }

    #[test]
    fn non_hermitian_hamiltonian_rejected() {
        let h = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            LindbladSystem::new(h, vec![]),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            LindbladSystem::new(ComplexMatrix::zeros(2), vec![ComplexMatrix::zeros(3)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn apply_examples() {
        let sys = qubit(1.0, 0.0);
        let id = ComplexMatrix::identity(2);
        assert!(apply_liouvillian(&sys, &id).unwrap().frobenius_norm() < 1e-15);
        let out = apply_liouvillian(&sys, &sigma_x()).unwrap();
        assert!((&out - &sigma_x().scale_real(-2.0)).frobenius_norm() < 1e-15);

        // H = hσ₁ only: −i h [σ₁, σ₃] = −i h (−2iσ₂) = −2hσ₂
        let h = 0.7;
        let sys = LindbladSystem::new(sigma_x().scale_real(h), vec![]).unwrap();
        let out = apply_liouvillian(&sys, &sigma_z()).unwrap();
        assert!((&out - &sigma_y().scale_real(-2.0 * h)).frobenius_norm() < 1e-15);
        assert!(apply_liouvillian(&sys, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn qubit_superoperator_is_diagonal_in_pauli_basis() {
        let sup = build_superoperator(&qubit(1.0, 0.0));
        let s2 = 2f64.sqrt().recip();
        let basis = [ComplexMatrix::identity(2), sigma_x(), sigma_y(), sigma_z()];
        let expect = [0.0, -2.0, -2.0, 0.0];
        for (b, e) in basis.iter().zip(expect) {
            let b = b.scale_real(s2);
            let out = sup.apply(&b).unwrap();
            assert!((&out - &b.scale_real(e)).frobenius_norm() < 1e-14);
        }
    }

    #[test]
    fn zero_generator_gives_zero_matrix() {
        let sys = LindbladSystem::new(ComplexMatrix::zeros(2), vec![]).unwrap();
        let sup = build_superoperator(&sys);
        assert_eq!(sup.matrix(), &ComplexMatrix::zeros(4));
        let modes = spectrum(&sys).unwrap();
        assert!(decay_gap(&modes).unwrap().is_infinite());
    }

    #[test]
    fn qubit_spectrum_examples() {
        let check = |h: f64, expect: &[C64]| {
            let modes = spectrum(&qubit(1.0, h)).unwrap();
            assert_eq!(modes.len(), 4);
            for e in expect {
                assert!(
                    modes.iter().any(|m| (m.eigenvalue - e).norm() < 1e-8),
                    "h = {h}: missing {e}; got {:?}",
                    modes.iter().map(|m| m.eigenvalue).collect::<Vec<_>>()
                );
            }
            for w in modes.windows(2) {
                assert!(w[0].eigenvalue.re >= w[1].eigenvalue.re - 1e-9);
            }
        };
        check(0.0, &[c(0.0, 0.0), c(-2.0, 0.0)]);
        let r3 = 3f64.sqrt();
        check(1.0, &[c(0.0, 0.0), c(-2.0, 0.0), c(-1.0, r3), c(-1.0, -r3)]);
        check(
            0.4,
            &[c(0.0, 0.0), c(-2.0, 0.0), c(-0.4, 0.0), c(-1.6, 0.0)],
        );
    }

    #[test]
    fn modes_are_canonical() {
        for mode in spectrum(&qubit(1.0, 1.0)).unwrap() {
            assert!((mode.eigenmatrix.frobenius_norm() - 1.0).abs() < 1e-14);
            let biggest = mode.eigenmatrix.max_abs();
            let pivot = mode
                .eigenmatrix
                .as_slice()
                .iter()
                .find(|z| z.norm() >= biggest * (1.0 - 1e-12))
                .unwrap();
            assert_eq!(pivot.im, 0.0);
            assert!(pivot.re > 0.0);
            assert!(mode.residual <= 1e-8 * build_superoperator(&qubit(1.0, 1.0)).norm());
        }
    }

    #[test]
    fn entropy_condition_examples() {
        assert_eq!(entropy_condition_defect(&qubit(1.0, 0.3)), 0.0);
        let raising = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let sys = LindbladSystem::new(ComplexMatrix::zeros(2), vec![raising]).unwrap();
        assert!((entropy_condition_defect(&sys) - 2f64.sqrt()).abs() < 1e-15);
        assert!(!entropy_condition_holds(&sys));

        // Σ_α ℓ_α Λ_α in a rotated basis
        let s = 2f64.sqrt().recip();
        let plus = [c(s, 0.0), c(0.0, s)];
        let minus = [c(s, 0.0), c(0.0, -s)];
        let l = &ComplexMatrix::outer(&plus, &plus).scale(c(0.3, -1.2))
            + &ComplexMatrix::outer(&minus, &minus).scale(c(-0.8, 0.5));
        let sys = LindbladSystem::new(ComplexMatrix::zeros(2), vec![l]).unwrap();
        assert!(entropy_condition_defect(&sys) < 1e-15);
        assert!(entropy_condition_holds(&sys));
    }

    #[test]
    fn identity_check_on_qubit_modes() {
        let sys = qubit(1.0, 0.0);
        let s2 = 2f64.sqrt().recip();
        let mode = SpectralMode {
            eigenvalue: c(-2.0, 0.0),
            eigenmatrix: sigma_x().scale_real(s2),
            residual: 0.0,
        };
        let chk = eigenvalue_identity_check(&sys, &mode).unwrap();
        assert!((chk.rhs_real + 2.0).abs() < 1e-14);
        assert!(chk.rhs_imag.abs() < 1e-14);
        assert!(chk.max_deviation <= 1e-8);

        let sys = qubit(0.7, 1.3);
        let mode = SpectralMode {
            eigenvalue: ZERO,
            eigenmatrix: ComplexMatrix::identity(2).scale_real(s2),
            residual: 0.0,
        };
        let chk = eigenvalue_identity_check(&sys, &mode).unwrap();
        assert!(chk.rhs_real.abs() < 1e-15 && chk.rhs_imag.abs() < 1e-15);

        let zero = SpectralMode {
            eigenvalue: ZERO,
            eigenmatrix: ComplexMatrix::zeros(2),
            residual: 0.0,
        };
        assert!(matches!(
            eigenvalue_identity_check(&sys, &zero),
            Err(Error::ZeroNorm)
        ));
    }

    #[test]
    fn decay_gap_examples() {
        assert!((decay_gap(&spectrum(&qubit(1.0, 0.0)).unwrap()).unwrap() - 2.0).abs() < 1e-8);
        assert!((decay_gap(&spectrum(&qubit(1.0, 0.4)).unwrap()).unwrap() - 0.4).abs() < 1e-8);
        assert!(matches!(decay_gap(&[]), Err(Error::EmptyModes)));
    }

    #[test]
    fn clusters_and_oscillating_modes() {
        let modes = spectrum(&qubit(1.0, 0.0)).unwrap();
        let clusters = eigenvalue_clusters(&modes);
        assert_eq!(clusters, vec![vec![0, 1], vec![2, 3]]);

        // Hamiltonian only: eigenvalues 0, 0, ±2i
        let sys = LindbladSystem::new(sigma_x(), vec![]).unwrap();
        let modes = spectrum(&sys).unwrap();
        let norm = build_superoperator(&sys).norm();
        assert_eq!(oscillating_stationary_modes(&modes, norm).len(), 2);
    }

    #[test]
    fn trace_preservation_of_superoperator() {
        let sys = qubit(0.9, 0.35);
        let sup = build_superoperator(&sys);
        assert!(sup.trace_preservation_defect() <= 1e-10 * sup.norm());
        let v = ComplexMatrix::from_rows(&[
            vec![c(0.2, 1.0), c(-0.4, 0.1)],
            vec![c(0.0, 0.3), c(1.5, -0.5)],
        ])
        .unwrap();
        let lv = apply_liouvillian(&sys, &v).unwrap();
        assert!(lv.trace().norm() <= 1e-10 * v.frobenius_norm() * sup.norm());
        // ⟨I, 𝓛v⟩ = 0
        assert!(
            frobenius_inner(&ComplexMatrix::identity(2), &lv)
                .unwrap()
                .norm()
                < 1e-14
        );
    }
}
