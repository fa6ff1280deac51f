//! Eigendecompositions backed by faer, with residuals measured here.

use super::{vec_norm, ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tolerance;

#[derive(Clone, Debug)]
pub struct HermitianEigenSystem {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal columns, `eigenvectors[k]` belongs to `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<C64>>,
}

impl HermitianEigenSystem {
    /// `‖A − VΛV†‖_F`.
    pub fn reconstruction_residual(&self, a: &ComplexMatrix) -> f64 {
        let d = a.dim();
        let rebuilt = ComplexMatrix::from_fn(d, |i, j| {
            self.eigenvalues
                .iter()
                .zip(&self.eigenvectors)
                .map(|(&l, v)| v[i] * v[j].conj() * l)
                .sum()
        });
        (a - &rebuilt).frobenius_norm()
    }

    /// Largest entrywise deviation of `V†V` from the identity.
    pub fn gram_defect(&self) -> f64 {
        let n = self.eigenvectors.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let g = super::inner(&self.eigenvectors[i], &self.eigenvectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}

#[derive(Clone, Debug)]
pub struct GeneralEigenSystem {
    /// Sorted by descending real part, ties by ascending imaginary part.
    pub eigenvalues: Vec<C64>,
    /// Right eigenvectors with unit 2-norm.
    pub eigenvectors: Vec<Vec<C64>>,
    /// `‖Av − λv‖₂` for each pair.
    pub residuals: Vec<f64>,
    /// `‖A‖_F` of the decomposed matrix.
    pub matrix_norm: f64,
}

impl GeneralEigenSystem {
    /// Worst residual divided by `‖A‖_F` (all vectors have unit norm).
    pub fn max_relative_residual(&self) -> f64 {
        let worst = self.residuals.iter().copied().fold(0.0, f64::max);
        if self.matrix_norm == 0.0 {
            worst
        } else {
            worst / self.matrix_norm
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Inputs with `‖A − A†‖_F > 1e-10·(1 + ‖A‖_F)` are rejected; the Hermitian
/// part is decomposed otherwise.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigenSystem> {
    let defect = a.hermiticity_defect();
    let tolerance = tolerance::HERMITIAN_REL * (1.0 + a.frobenius_norm());
    if defect > tolerance {
        return Err(Error::NotHermitian { defect, tolerance });
    }
    let d = a.dim();
    if d == 1 {
        return Ok(HermitianEigenSystem {
            eigenvalues: vec![a[(0, 0)].re],
            eigenvectors: vec![vec![C64::new(1.0, 0.0)]],
        });
    }
    let h = a.hermitian_part().to_faer();
    let evd = h
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::NoConvergence {
            size: d,
            partial_residuals: Vec::new(),
        })?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut pairs: Vec<(f64, Vec<C64>)> = (0..d)
        .map(|k| (s[k].re, (0..d).map(|i| u[(i, k)]).collect()))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(HermitianEigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

pub fn min_eigenvalue_hermitian(a: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigen(a)?.eigenvalues[0])
}

/// Eigendecomposition of an arbitrary square complex matrix.
///
/// Residuals are recomputed from the returned pairs rather than trusted.
pub fn general_eigen(a: &ComplexMatrix) -> Result<GeneralEigenSystem> {
    let n = a.dim();
    let matrix_norm = a.frobenius_norm();
    let (values, vectors): (Vec<C64>, Vec<Vec<C64>>) = if n == 1 {
        (vec![a[(0, 0)]], vec![vec![C64::new(1.0, 0.0)]])
    } else {
        let evd = a.to_faer().eigen().map_err(|_| Error::NoConvergence {
            size: n,
            partial_residuals: Vec::new(),
        })?;
        let s = evd.S().column_vector();
        let u = evd.U();
        (0..n)
            .map(|k| {
                let mut v: Vec<C64> = (0..n).map(|i| u[(i, k)]).collect();
                let norm = vec_norm(&v);
                if norm > 0.0 {
                    v.iter_mut().for_each(|z| *z /= norm);
                }
                (s[k], v)
            })
            .unzip()
    };

    let mut order: Vec<usize> = (0..n).collect();
    sort_spectrum(
        &values,
        &mut order,
        tolerance::HERMITIAN_REL * (1.0 + matrix_norm),
    );

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for k in order {
        let lambda = values[k];
        let v = &vectors[k];
        let av = a.mat_vec(v);
        let r: Vec<C64> = av.iter().zip(v).map(|(x, y)| x - lambda * y).collect();
        residuals.push(vec_norm(&r));
        eigenvalues.push(lambda);
        eigenvectors.push(v.clone());
    }
    if eigenvalues
        .iter()
        .any(|z: &C64| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::NoConvergence {
            size: n,
            partial_residuals: residuals,
        });
    }
    Ok(GeneralEigenSystem {
        eigenvalues,
        eigenvectors,
        residuals,
        matrix_norm,
    })
}

/// Orders indices by descending real part; real parts within `tie` of the
/// first member of a run are ordered by ascending imaginary part.
fn sort_spectrum(values: &[C64], order: &mut [usize], tie: f64) {
    order.sort_by(|&i, &j| values[j].re.total_cmp(&values[i].re));
    let mut start = 0;
    while start < order.len() {
        let anchor = values[order[start]].re;
        let mut end = start + 1;
        while end < order.len() && (anchor - values[order[end]].re) <= tie {
            end += 1;
        }
        order[start..end].sort_by(|&i, &j| values[i].im.total_cmp(&values[j].im));
        start = end;
    }
}

/// Condition number `σ_max / σ_min` of the matrix whose columns are `columns`.
pub(crate) fn condition_number(columns: &[Vec<C64>]) -> f64 {
    let n = columns.len();
    if n == 0 {
        return 1.0;
    }
    let m = faer::Mat::<C64>::from_fn(n, n, |i, j| columns[j][i]);
    match m.singular_values() {
        Ok(sv) => {
            let max = sv.iter().copied().fold(0.0, f64::max);
            let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
            if min <= 0.0 || !min.is_finite() {
                f64::INFINITY
            } else {
                max / min
            }
        }
        Err(_) => f64::INFINITY,
    }
}

/// Solves `V c = b` where `V` has the given columns.
pub(crate) fn solve_columns(columns: &[Vec<C64>], b: &[C64]) -> Vec<C64> {
    use faer::linalg::solvers::Solve;
    let n = columns.len();
    let m = faer::Mat::<C64>::from_fn(n, n, |i, j| columns[j][i]);
    let rhs = faer::Mat::<C64>::from_fn(n, 1, |i, _| b[i]);
    let x = m.partial_piv_lu().solve(rhs);
    (0..n).map(|i| x[(i, 0)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::pauli::sigma_x;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hermitian_diagonal() {
        let sys = hermitian_eigen(&ComplexMatrix::real_diagonal(&[0.7, 0.3])).unwrap();
        assert!((sys.eigenvalues[0] - 0.3).abs() < 1e-15);
        assert!((sys.eigenvalues[1] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn hermitian_sigma_x() {
        let a = sigma_x();
        let sys = hermitian_eigen(&a).unwrap();
        assert!((sys.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((sys.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(sys.reconstruction_residual(&a) <= 1e-10 * (1.0 + a.frobenius_norm()));
        assert!(sys.gram_defect() <= 1e-10);
    }

    #[test]
    fn hermitian_rank_one_projector() {
        let s = 3f64.sqrt().recip();
        let v = [c(s, 0.0), c(0.0, s), c(-s, 0.0)];
        let p = ComplexMatrix::outer(&v, &v);
        let sys = hermitian_eigen(&p).unwrap();
        for (got, want) in sys.eigenvalues.iter().zip([0.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn non_hermitian_rejected_with_defect() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        match hermitian_eigen(&a) {
            Err(Error::NotHermitian { defect, .. }) => {
                assert!((defect - 2f64.sqrt()).abs() < 1e-15)
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn min_eigenvalue_examples() {
        assert!(
            (min_eigenvalue_hermitian(&ComplexMatrix::identity(3)).unwrap() - 1.0).abs() < 1e-15
        );
        let m = min_eigenvalue_hermitian(&ComplexMatrix::real_diagonal(&[0.9, 0.1, 0.0])).unwrap();
        assert!(m.abs() < 1e-15);
        // ½(I + 0.99σ₁) has eigenvalues (1 ± 0.99)/2
        let rho = (&ComplexMatrix::identity(2) + &sigma_x().scale_real(0.99)).scale_real(0.5);
        assert!((min_eigenvalue_hermitian(&rho).unwrap() - 0.005).abs() < 1e-14);
    }

    #[test]
    fn general_diagonal_sorted() {
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 3.0)]);
        let sys = general_eigen(&a).unwrap();
        let want = [c(1.0, 0.0), c(0.0, 3.0), c(-2.0, 0.0)];
        for (got, want) in sys.eigenvalues.iter().zip(want) {
            assert!((got - want).norm() < 1e-14, "{got} vs {want}");
        }
        // unit basis vectors up to phase
        for (lambda, v) in sys.eigenvalues.iter().zip(&sys.eigenvectors) {
            let k = [c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 3.0)]
                .iter()
                .position(|z| (z - lambda).norm() < 1e-12)
                .unwrap();
            assert!((v[k].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn general_rotation_generator() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap();
        let sys = general_eigen(&a).unwrap();
        // equal real parts: ascending imaginary part
        assert!((sys.eigenvalues[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((sys.eigenvalues[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn general_companion_matrix() {
        // (λ+1)(λ+2)(λ+3) = λ³ + 6λ² + 11λ + 6
        let a = ComplexMatrix::from_real_rows(&[
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
            &[-6.0, -11.0, -6.0],
        ])
        .unwrap();
        let sys = general_eigen(&a).unwrap();
        for (got, want) in sys.eigenvalues.iter().zip([-1.0, -2.0, -3.0]) {
            assert!((got - c(want, 0.0)).norm() < 1e-10, "{got}");
        }
        assert!(sys.max_relative_residual() <= 1e-8);
    }

    #[test]
    fn ill_conditioned_columns_detected() {
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        assert!(condition_number(&[e1.clone(), e1]).is_infinite());
        let id = vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ];
        assert!((condition_number(&id) - 1.0).abs() < 1e-14);
        let x = solve_columns(&id, &[c(2.0, 1.0), c(0.0, -1.0)]);
        assert_eq!(x, vec![c(2.0, 1.0), c(0.0, -1.0)]);
    }

    fn arb(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |v| {
            ComplexMatrix::from_row_major(dim, v.into_iter().map(|(a, b)| c(a, b)).collect())
                .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn general_residual_contract_and_trace(a in arb(5)) {
            let sys = general_eigen(&a).unwrap();
            prop_assert_eq!(sys.len(), 5);
            for r in &sys.residuals {
                prop_assert!(*r <= 1e-8 * a.frobenius_norm());
            }
            let sum: C64 = sys.eigenvalues.iter().sum();
            prop_assert!((sum - a.trace()).norm() <= 1e-8 * (1.0 + a.frobenius_norm()));
            for w in sys.eigenvalues.windows(2) {
                prop_assert!(w[0].re >= w[1].re - 1e-9);
            }
        }

        #[test]
        fn general_agrees_with_hermitian(a in arb(4)) {
            let h = a.hermitian_part();
            let herm = hermitian_eigen(&h).unwrap();
            prop_assert!(herm.reconstruction_residual(&h) <= 1e-10 * (1.0 + h.frobenius_norm()));
            prop_assert!(herm.gram_defect() <= 1e-10);
            let gen = general_eigen(&h).unwrap();
            // descending real parts vs ascending Hermitian eigenvalues
            for (g, e) in gen.eigenvalues.iter().rev().zip(&herm.eigenvalues) {
                prop_assert!((g - c(*e, 0.0)).norm() <= 1e-8);
            }
        }
    }
}
