//! Measurement bases, apparatus certification, the closed-form solution of
//! the Lindblad equation for diagonal apparatuses, and the collapse maps.
//!
//! An apparatus is diagonal in a basis `{|α⟩}` when every jump operator and
//! the Hamiltonian are combinations of the rank-one projectors `Λ_α`:
//!
//! ```text
//! L_n = Σ_α ℓ_{nα} Λ_α        H = Σ_α h_α Λ_α   (h_α real)
//! ```
//!
//! For such generators
//!
//! ```text
//! ρ(t) = Σ_{αβ} Λ_α ρ(0) Λ_β exp(λ_{αβ} t)
//! λ_{αβ} = −½ Σ_n |ℓ_{nα} − ℓ_{nβ}|² + i Im Σ_n ℓ_{nα} ℓ*_{nβ} − i (h_α − h_β)
//! ```
//!
//! Only pairs with equal coefficient columns survive at late times, which
//! leaves `Σ_C Λ_C ρ(0) Λ_C` with `Λ_C` the projector onto a class of
//! indistinguishable outcomes.

use serde::Serialize;

use crate::dynamics::DensityMatrix;
use crate::error::{Error, Result};
use crate::liouvillian::LindbladSystem;
use crate::matrix::{commutator, inner, ComplexMatrix, C64, ZERO};
use crate::tolerance;

/// Rank-one orthogonal projectors plus a partition of their indices into classes.
#[derive(Clone, Debug)]
pub struct MeasurementBasis {
    /// Vectors exactly as supplied, kept for serialization.
    source_vectors: Vec<Vec<C64>>,
    /// Orthonormalized copies of the supplied vectors.
    vectors: Vec<Vec<C64>>,
    projectors: Vec<ComplexMatrix>,
    classes: Vec<Vec<usize>>,
    /// `class_of[α]` is the index into `classes` containing α.
    class_of: Vec<usize>,
}

/// `{{0}, {1}, …, {d−1}}`: a complete measurement.
pub fn singleton_classes(dim: usize) -> Vec<Vec<usize>> {
    (0..dim).map(|a| vec![a]).collect()
}

/// Builds a basis from `d` vectors whose Gram matrix is within 1e-8 of the
/// identity. Class indices are zero-based.
pub fn basis_from_vectors(
    vectors: Vec<Vec<C64>>,
    classes: Vec<Vec<usize>>,
) -> Result<MeasurementBasis> {
    let d = vectors.len();
    if d == 0 {
        return Err(Error::BadShape { dim: 0, len: 0 });
    }
    for v in &vectors {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
    }
    let gram_defect = gram_defect(&vectors);
    if gram_defect > tolerance::ORTHONORMAL_BASIS {
        return Err(Error::NotOrthonormal {
            defect: gram_defect,
        });
    }

    let mut class_of = vec![usize::MAX; d];
    for (ci, class) in classes.iter().enumerate() {
        if class.is_empty() {
            return Err(Error::Partition(format!("class {ci} is empty")));
        }
        for &a in class {
            if a >= d {
                return Err(Error::Partition(format!(
                    "index {a} out of range for dimension {d}"
                )));
            }
            if class_of[a] != usize::MAX {
                return Err(Error::Partition(format!(
                    "index {a} appears in more than one class"
                )));
            }
            class_of[a] = ci;
        }
    }
    if let Some(a) = class_of.iter().position(|&c| c == usize::MAX) {
        return Err(Error::Partition(format!("index {a} is not in any class")));
    }

    let orthonormal = gram_schmidt(&vectors);
    let projectors = orthonormal
        .iter()
        .map(|v| ComplexMatrix::outer(v, v))
        .collect();
    Ok(MeasurementBasis {
        source_vectors: vectors,
        vectors: orthonormal,
        projectors,
        classes,
        class_of,
    })
}

/// Largest entrywise deviation of the Gram matrix from the identity.
fn gram_defect(vectors: &[Vec<C64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner(u, v) - target).norm());
        }
    }
    worst
}

/// Modified Gram-Schmidt, two passes.
fn gram_schmidt(vectors: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let proj = inner(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= proj * qi;
                }
            }
        }
        let norm = crate::matrix::vec_norm(&w);
        w.iter_mut().for_each(|z| *z /= norm);
        out.push(w);
    }
    out
}

impl MeasurementBasis {
    /// The computational basis with singleton classes.
    pub fn standard(dim: usize) -> Self {
        let vectors = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|i| if i == a { C64::new(1.0, 0.0) } else { ZERO })
                    .collect()
            })
            .collect();
        basis_from_vectors(vectors, singleton_classes(dim)).expect("standard basis is valid")
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    pub fn source_vectors(&self) -> &[Vec<C64>] {
        &self.source_vectors
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, alpha: usize) -> usize {
        self.class_of[alpha]
    }

    pub fn is_complete(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// `Λ_C = Σ_{α∈C} Λ_α`.
    pub fn class_projector(&self, class: usize) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(self.dim());
        for &a in &self.classes[class] {
            p += &self.projectors[a];
        }
        p
    }

    /// Worst violation of `Λ_αΛ_β = δ_{αβ}Λ_α`, `Σ Λ_α = I`, `Tr Λ_α = 1`, `Λ_α† = Λ_α`.
    pub fn projector_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        let mut sum = ComplexMatrix::zeros(d);
        for (a, pa) in self.projectors.iter().enumerate() {
            sum += pa;
            worst = worst.max((pa.trace() - C64::new(1.0, 0.0)).norm());
            worst = worst.max(pa.hermiticity_defect());
            for (b, pb) in self.projectors.iter().enumerate() {
                let prod = pa * pb;
                let target = if a == b {
                    pa.clone()
                } else {
                    ComplexMatrix::zeros(d)
                };
                worst = worst.max((&prod - &target).frobenius_norm());
            }
        }
        worst.max((&sum - &ComplexMatrix::identity(d)).frobenius_norm())
    }

    /// Unitary whose columns are the basis vectors.
    fn unitary(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |i, j| self.vectors[j][i])
    }

    /// `U† A U`, the matrix of A in this basis.
    pub fn to_basis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let u = self.unitary();
        &(&u.adjoint() * a) * &u
    }

    /// `U A U†`, back to the standard basis.
    pub fn from_basis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let u = self.unitary();
        &(&u * a) * &u.adjoint()
    }

    /// `⟨α|A|α⟩` for every α.
    pub fn diagonal_elements(&self, a: &ComplexMatrix) -> Vec<C64> {
        self.vectors
            .iter()
            .map(|v| inner(v, &a.mat_vec(v)))
            .collect()
    }
}

/// Coefficients `ℓ_{nα}` (one row per jump) and `h_α` of a diagonal apparatus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApparatusCoefficients {
    #[serde(serialize_with = "crate::scenario_io::serialize_complex_rows")]
    pub ell: Vec<Vec<C64>>,
    pub h: Vec<f64>,
}

impl ApparatusCoefficients {
    pub fn new(ell: Vec<Vec<C64>>, h: Vec<f64>) -> Result<Self> {
        for row in &ell {
            if row.len() != h.len() {
                return Err(Error::DimensionMismatch {
                    expected: h.len(),
                    found: row.len(),
                });
            }
        }
        Ok(Self { ell, h })
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    pub fn jump_count(&self) -> usize {
        self.ell.len()
    }

    pub fn max_abs_ell(&self) -> f64 {
        self.ell
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `max_n |ℓ_{nα} − ℓ_{nβ}|`.
    pub fn column_distance(&self, alpha: usize, beta: usize) -> f64 {
        self.ell
            .iter()
            .map(|row| (row[alpha] - row[beta]).norm())
            .fold(0.0, f64::max)
    }

    /// Whether columns α and β of ℓ agree within `1e-8·(1 + max|ℓ|)`.
    pub fn columns_degenerate(&self, alpha: usize, beta: usize) -> bool {
        self.column_distance(alpha, beta) <= tolerance::DEGENERACY_REL * (1.0 + self.max_abs_ell())
    }

    /// `L_n = Σ_α ℓ_{nα} Λ_α` and `H = Σ_α h_α Λ_α`.
    pub fn system(&self, basis: &MeasurementBasis) -> Result<LindbladSystem> {
        if basis.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: self.dim(),
            });
        }
        let combine = |weights: &[C64]| {
            let mut m = ComplexMatrix::zeros(basis.dim());
            for (w, p) in weights.iter().zip(basis.projectors()) {
                m += &p.scale(*w);
            }
            m
        };
        let h: Vec<C64> = self.h.iter().map(|&x| C64::new(x, 0.0)).collect();
        let hamiltonian = combine(&h).hermitian_part();
        let jumps = self.ell.iter().map(|row| combine(row)).collect();
        LindbladSystem::new(hamiltonian, jumps)
    }
}

/// Defects measured by [`certify`]. The apparatus passes when every defect
/// is at most `threshold`.
#[derive(Clone, Debug, Serialize)]
pub struct CertificationReport {
    /// Per jump, `max_α ‖[L_n, Λ_α]‖_F`.
    pub commutator_defects: Vec<f64>,
    /// `max_α ‖[H, Λ_α]‖_F`.
    pub hamiltonian_commutator_defect: f64,
    /// Per jump, `‖L_n − Σ_α ℓ_{nα} Λ_α‖_F`.
    pub jump_reconstruction_defects: Vec<f64>,
    /// `‖H − Σ_α h_α Λ_α‖_F`.
    pub hamiltonian_reconstruction_defect: f64,
    /// Largest `|ℓ_{nβ} − ℓ_{nγ}|` with β, γ in one class.
    pub ell_class_defect: f64,
    /// Largest `|h_β − h_γ|` with β, γ in one class.
    pub h_class_defect: f64,
    /// Largest `|Im ⟨α|H|α⟩|`.
    pub h_imag_defect: f64,
    pub coefficients: ApparatusCoefficients,
    pub threshold: f64,
    pub passed: bool,
    /// Pairs in different classes whose ℓ columns coincide: the apparatus
    /// cannot tell them apart, so the effective measurement is coarser than declared.
    pub degenerate_pairs: Vec<(usize, usize)>,
    pub warnings: Vec<String>,
}

impl CertificationReport {
    /// The defects that exceed the threshold, by name.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let over = |x: f64| x > self.threshold;
        if self.commutator_defects.iter().any(|&x| over(x)) {
            out.push("jump commutator");
        }
        if over(self.hamiltonian_commutator_defect) {
            out.push("hamiltonian commutator");
        }
        if self.jump_reconstruction_defects.iter().any(|&x| over(x)) {
            out.push("jump reconstruction");
        }
        if over(self.hamiltonian_reconstruction_defect) {
            out.push("hamiltonian reconstruction");
        }
        if over(self.ell_class_defect) {
            out.push("jump class constancy");
        }
        if over(self.h_class_defect) {
            out.push("hamiltonian class constancy");
        }
        if over(self.h_imag_defect) {
            out.push("hamiltonian imaginary part");
        }
        out
    }
}

/// Checks whether `sys` is diagonal in `basis` with class-constant coefficients.
///
/// Coefficients are read off as `ℓ_{nα} = ⟨α|L_n|α⟩`, `h_α = ⟨α|H|α⟩`; the
/// verdict compares every defect with `1e-8·(1 + max(‖H‖_F, ‖L_n‖_F))`.
pub fn certify(sys: &LindbladSystem, basis: &MeasurementBasis) -> Result<CertificationReport> {
    if sys.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: sys.dim(),
        });
    }
    let d = basis.dim();
    let max_commutator = |op: &ComplexMatrix| -> Result<f64> {
        basis
            .projectors()
            .iter()
            .map(|p| commutator(op, p).map(|c| c.frobenius_norm()))
            .try_fold(0.0f64, |acc, x| x.map(|x| acc.max(x)))
    };
    let rebuild = |weights: &[C64]| {
        let mut m = ComplexMatrix::zeros(d);
        for (w, p) in weights.iter().zip(basis.projectors()) {
            m += &p.scale(*w);
        }
        m
    };

    let mut commutator_defects = Vec::with_capacity(sys.jumps().len());
    let mut jump_reconstruction_defects = Vec::with_capacity(sys.jumps().len());
    let mut ell = Vec::with_capacity(sys.jumps().len());
    for l in sys.jumps() {
        commutator_defects.push(max_commutator(l)?);
        let row = basis.diagonal_elements(l);
        jump_reconstruction_defects.push((l - &rebuild(&row)).frobenius_norm());
        ell.push(row);
    }
    let h_diag = basis.diagonal_elements(sys.hamiltonian());
    let hamiltonian_commutator_defect = max_commutator(sys.hamiltonian())?;
    let hamiltonian_reconstruction_defect =
        (sys.hamiltonian() - &rebuild(&h_diag)).frobenius_norm();
    let h_imag_defect = h_diag.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let h: Vec<f64> = h_diag.iter().map(|z| z.re).collect();

    let mut ell_class_defect = 0.0f64;
    let mut h_class_defect = 0.0f64;
    for class in basis.classes() {
        for &b in class {
            for &g in class {
                h_class_defect = h_class_defect.max((h[b] - h[g]).abs());
                for row in &ell {
                    ell_class_defect = ell_class_defect.max((row[b] - row[g]).norm());
                }
            }
        }
    }

    let coefficients = ApparatusCoefficients { ell, h };
    let mut degenerate_pairs = Vec::new();
    let mut warnings = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            if basis.class_of(a) != basis.class_of(b) && coefficients.columns_degenerate(a, b) {
                degenerate_pairs.push((a, b));
            }
        }
    }
    if !degenerate_pairs.is_empty() {
        warnings.push(format!(
            "jump coefficients do not distinguish {} pair(s) of outcomes declared in different classes; \
             the effective measurement is coarser than declared",
            degenerate_pairs.len()
        ));
    }

    let scale = sys
        .jumps()
        .iter()
        .map(ComplexMatrix::frobenius_norm)
        .fold(sys.hamiltonian().frobenius_norm(), f64::max);
    let threshold = tolerance::CERTIFY_REL * (1.0 + scale);
    let mut report = CertificationReport {
        commutator_defects,
        hamiltonian_commutator_defect,
        jump_reconstruction_defects,
        hamiltonian_reconstruction_defect,
        ell_class_defect,
        h_class_defect,
        h_imag_defect,
        coefficients,
        threshold,
        passed: false,
        degenerate_pairs,
        warnings,
    };
    report.passed = report.failures().is_empty();
    Ok(report)
}

/// Pairwise rates `λ_{αβ}` and overlaps `C_{αβ} = Σ_n ℓ_{nα} ℓ*_{nβ}`.
#[derive(Clone, Debug)]
pub struct DecayMatrix {
    pub lambda: ComplexMatrix,
    pub c: ComplexMatrix,
    /// Largest difference between the two algebraic forms of λ; see [`decay_matrix`].
    pub self_check_defect: f64,
}

impl DecayMatrix {
    pub fn dim(&self) -> usize {
        self.lambda.dim()
    }

    /// `min |Re λ_{αβ}|` over pairs in different classes; `+∞` with one class.
    pub fn gap(&self, basis: &MeasurementBasis) -> f64 {
        let d = self.dim();
        let mut gap = f64::INFINITY;
        for a in 0..d {
            for b in 0..d {
                if basis.class_of(a) != basis.class_of(b) {
                    gap = gap.min(self.lambda[(a, b)].re.abs());
                }
            }
        }
        gap
    }
}

/// Computes
///
/// ```text
/// λ_{αβ} = −½ Σ_n |ℓ_{nα} − ℓ_{nβ}|² + i Im C_{αβ} − i (h_α − h_β)
/// ```
///
/// and checks it against `C_{αβ} − ½ C_{αα} − ½ C_{ββ} − i (h_α − h_β)`;
/// the two must agree to 1e-12 relative to `1 + max|C|`.
pub fn decay_matrix(coeffs: &ApparatusCoefficients) -> DecayMatrix {
    let d = coeffs.dim();
    let c = ComplexMatrix::from_fn(d, |a, b| {
        coeffs.ell.iter().map(|row| row[a] * row[b].conj()).sum()
    });
    let lambda = ComplexMatrix::from_fn(d, |a, b| {
        let spread: f64 = coeffs
            .ell
            .iter()
            .map(|row| (row[a] - row[b]).norm_sqr())
            .sum();
        C64::new(-0.5 * spread, c[(a, b)].im - (coeffs.h[a] - coeffs.h[b]))
    });
    let overlap_form = ComplexMatrix::from_fn(d, |a, b| {
        c[(a, b)] - c[(a, a)] * 0.5 - c[(b, b)] * 0.5 - C64::new(0.0, coeffs.h[a] - coeffs.h[b])
    });
    let self_check_defect = (&lambda - &overlap_form).max_abs();
    debug_assert!(
        self_check_defect <= tolerance::DECAY_SELF_CHECK * (1.0 + c.max_abs()),
        "decay matrix forms disagree by {self_check_defect:e}"
    );
    DecayMatrix {
        lambda,
        c,
        self_check_defect,
    }
}

/// Closed-form evolution for a fixed apparatus and basis.
#[derive(Clone, Debug)]
pub struct ClosedFormSolution {
    basis: MeasurementBasis,
    decay: DecayMatrix,
}

impl ClosedFormSolution {
    pub fn new(coeffs: &ApparatusCoefficients, basis: &MeasurementBasis) -> Result<Self> {
        if coeffs.dim() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: coeffs.dim(),
            });
        }
        Ok(Self {
            basis: basis.clone(),
            decay: decay_matrix(coeffs),
        })
    }

    pub fn decay(&self) -> &DecayMatrix {
        &self.decay
    }

    /// `Σ_{αβ} Λ_α ρ₀ Λ_β e^{λ_{αβ} t}`, evaluated as `U (e^{λt} ∘ U†ρ₀U) U†`.
    pub fn evolve_raw(&self, rho0: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
        if rho0.dim() != self.basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: rho0.dim(),
            });
        }
        if t.is_nan() || t < 0.0 {
            return Err(Error::Schedule(format!(
                "time must be non-negative, got {t}"
            )));
        }
        if t == 0.0 {
            return Ok(rho0.clone());
        }
        let mut in_basis = self.basis.to_basis(rho0);
        let d = in_basis.dim();
        for a in 0..d {
            for b in 0..d {
                if a != b {
                    in_basis[(a, b)] *= (self.decay.lambda[(a, b)] * t).exp();
                }
            }
        }
        Ok(self.basis.from_basis(&in_basis))
    }

    pub fn evolve(&self, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_evolved(
            self.evolve_raw(rho0.matrix(), t)?,
        ))
    }
}

pub fn closed_form_evolve(
    coeffs: &ApparatusCoefficients,
    basis: &MeasurementBasis,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    ClosedFormSolution::new(coeffs, basis)?.evolve(rho0, t)
}

/// Outcome probabilities, non-negative and summing to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Clamps values in `[−1e-12, 0)` to zero, then requires `|Σp − 1| ≤ 1e-10`.
    pub fn new(mut p: Vec<f64>) -> Result<Self> {
        for (index, x) in p.iter_mut().enumerate() {
            if *x < 0.0 {
                if *x >= -tolerance::PROBABILITY_CLAMP {
                    *x = 0.0;
                } else {
                    return Err(Error::NegativeProbability { index, value: *x });
                }
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tolerance::PROBABILITY_SUM {
            return Err(Error::ProbabilitySum { sum });
        }
        Ok(Self(p))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

fn check_state_dim(basis: &MeasurementBasis, rho0: &DensityMatrix) -> Result<()> {
    if rho0.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: rho0.dim(),
        });
    }
    Ok(())
}

/// `Σ_α Λ_α ρ₀ Λ_α` with `p_α = ⟨α|ρ₀|α⟩`.
pub fn born_collapse(
    basis: &MeasurementBasis,
    rho0: &DensityMatrix,
) -> Result<(DensityMatrix, ProbabilityVector)> {
    check_state_dim(basis, rho0)?;
    let p: Vec<f64> = basis
        .diagonal_elements(rho0.matrix())
        .iter()
        .map(|z| z.re)
        .collect();
    let mut limit = ComplexMatrix::zeros(basis.dim());
    for (pa, proj) in p.iter().zip(basis.projectors()) {
        limit += &proj.scale_real(*pa);
    }
    Ok((
        DensityMatrix::from_evolved(limit),
        ProbabilityVector::new(p)?,
    ))
}

/// `Σ_C Λ_C ρ₀ Λ_C`.
pub fn class_collapse(basis: &MeasurementBasis, rho0: &DensityMatrix) -> Result<DensityMatrix> {
    check_state_dim(basis, rho0)?;
    let mut limit = ComplexMatrix::zeros(basis.dim());
    for c in 0..basis.classes().len() {
        let pc = basis.class_projector(c);
        limit += &(&(&pc * rho0.matrix()) * &pc);
    }
    Ok(DensityMatrix::from_evolved(limit))
}

/// `Tr(Λ_C ρ₀)` for every class.
pub fn class_probabilities(
    basis: &MeasurementBasis,
    rho0: &DensityMatrix,
) -> Result<ProbabilityVector> {
    check_state_dim(basis, rho0)?;
    let diag = basis.diagonal_elements(rho0.matrix());
    ProbabilityVector::new(
        basis
            .classes()
            .iter()
            .map(|class| class.iter().map(|&a| diag[a].re).sum())
            .collect(),
    )
}
