//! Dense square complex matrices.
//!
//! Storage is row-major. The supported envelope is `dim ≤ 32` for operators
//! on the Hilbert space, which puts superoperators at `dim ≤ 1024`; nothing
//! here is sparse or blocked.

mod eigen;

pub(crate) use eigen::{condition_number, solve_columns};
pub use eigen::{
    general_eigen, hermitian_eigen, min_eigenvalue_hermitian, GeneralEigenSystem,
    HermitianEigenSystem,
};

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Wraps row-major entries. Fails unless `dim ≥ 1` and `data.len() == dim²`.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::BadShape {
                dim,
                len: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from nested rows, which must form a non-empty square.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::BadShape {
                    dim,
                    len: dim * (dim - 1) + row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    /// Real-valued rows, handy for Pauli matrices and tests.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| ZERO)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn real_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len(), "outer product needs equal lengths");
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.dim).map(<[C64]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(C64::conj).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// `‖A − A†‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim;
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn mat_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim, "vector length must match dimension");
        self.data
            .chunks(self.dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x^H · A`, returned as a row.
    pub fn vec_mat(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim, "vector length must match dimension");
        let mut out = vec![ZERO; self.dim];
        for (i, xi) in x.iter().enumerate() {
            let xi = xi.conj();
            for (o, a) in out
                .iter_mut()
                .zip(&self.data[i * self.dim..(i + 1) * self.dim])
            {
                *o += xi * a;
            }
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            let row = &self.data[i * d..(i + 1) * d];
            let dst = &mut out[i * d..(i + 1) * d];
            for (k, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let other_row = &other.data[k * d..(k + 1) * d];
                for (o, &b) in dst.iter_mut().zip(other_row) {
                    *o += a * b;
                }
            }
        }
        Self { dim: d, data: out }
    }

    /// Kronecker product `A ⊗ B`.
    pub fn kron(&self, other: &Self) -> Self {
        let (m, n) = (self.dim, other.dim);
        Self::from_fn(m * n, |r, c| self[(r / n, c / n)] * other[(r % n, c % n)])
    }

    /// Column-stacking vectorization: `vec(X)[i + j·d] = X[i][j]`.
    pub fn vec_columns(&self) -> Vec<C64> {
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                out[i + j * d] = self[(i, j)];
            }
        }
        out
    }

    /// Inverse of [`ComplexMatrix::vec_columns`].
    pub fn unvec_columns(dim: usize, v: &[C64]) -> Result<Self> {
        if dim == 0 || v.len() != dim * dim {
            return Err(Error::BadShape { dim, len: v.len() });
        }
        Ok(Self::from_fn(dim, |i, j| v[i + j * dim]))
    }

    pub(crate) fn to_faer(&self) -> faer::Mat<C64> {
        faer::Mat::from_fn(self.dim, self.dim, |i, j| self[(i, j)])
    }
}

pub(crate) fn check_dims(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    Ok(())
}

/// `A†`.
pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

/// `AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dims(a, b)?;
    Ok(&a.mul_unchecked(b) - &b.mul_unchecked(a))
}

/// `Tr(A†B)`.
pub fn frobenius_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    check_dims(a, b)?;
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
}

pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

macro_rules! elementwise {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;

            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                assert_eq!(self.dim, rhs.dim, "dimension mismatch");
                ComplexMatrix {
                    dim: self.dim,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a $op b).collect(),
                }
            }
        }

        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;

            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                (&self).$method(&rhs)
            }
        }
    };
}

elementwise!(Add, add, +);
elementwise!(Sub, sub, -);

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Mul<ComplexMatrix> for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: C64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale_real(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for row in self.data.chunks(self.dim) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Pauli matrices, used throughout the qubit scenarios.
pub mod pauli {
    use super::{ComplexMatrix, C64, ZERO};

    pub fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![ZERO, C64::new(0.0, -1.0)],
            vec![C64::new(0.0, 1.0), ZERO],
        ])
        .unwrap()
    }

    pub fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::pauli::*;
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn arb_matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |v| {
            ComplexMatrix::from_row_major(dim, v.into_iter().map(|(a, b)| c(a, b)).collect())
                .unwrap()
        })
    }

    #[test]
    fn shape_is_validated() {
        assert!(ComplexMatrix::from_row_major(0, vec![]).is_err());
        assert!(ComplexMatrix::from_row_major(2, vec![ONE; 3]).is_err());
        assert!(ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ONE]]).is_err());
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(
            adjoint(&ComplexMatrix::identity(2)),
            ComplexMatrix::identity(2)
        );
        let shift = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let expect = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(adjoint(&shift), expect);
    }

    #[test]
    fn commutator_of_paulis() {
        // [σ₁, σ₃] = −2iσ₂
        let got = commutator(&sigma_x(), &sigma_z()).unwrap();
        let expect = sigma_y().scale(c(0.0, -2.0));
        assert!((&got - &expect).frobenius_norm() < 1e-15);
        let a = sigma_x();
        assert_eq!(commutator(&a, &a).unwrap(), ComplexMatrix::zeros(2));
    }

    #[test]
    fn commutator_of_orthogonal_projectors_vanishes() {
        let p0 = ComplexMatrix::real_diagonal(&[1.0, 0.0, 0.0]);
        let p1 = ComplexMatrix::real_diagonal(&[0.0, 1.0, 0.0]);
        assert_eq!(commutator(&p0, &p1).unwrap(), ComplexMatrix::zeros(3));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(matches!(
            commutator(&a, &b),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        ));
        assert!(frobenius_inner(&a, &b).is_err());
    }

    #[test]
    fn frobenius_inner_examples() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(frobenius_inner(&id, &id).unwrap(), c(2.0, 0.0));
        assert_eq!(frobenius_inner(&sigma_x(), &sigma_y()).unwrap(), ZERO);
    }

    #[test]
    fn kron_matches_vec_identity() {
        // vec(AXB) = (Bᵀ ⊗ A) vec(X)
        let a = sigma_x();
        let b = sigma_y();
        let x = ComplexMatrix::from_rows(&[
            vec![c(1.0, 2.0), c(0.5, 0.0)],
            vec![c(-1.0, 0.3), c(0.0, 1.0)],
        ])
        .unwrap();
        let lhs = (&(&a * &x) * &b).vec_columns();
        let rhs = b.transpose().kron(&a).mat_vec(&x.vec_columns());
        for (l, r) in lhs.iter().zip(&rhs) {
            assert!((l - r).norm() < 1e-14);
        }
    }

    #[test]
    fn outer_builds_projector() {
        let v = [c(1.0, 0.0), c(0.0, 0.0)];
        assert_eq!(
            ComplexMatrix::outer(&v, &v),
            ComplexMatrix::real_diagonal(&[1.0, 0.0])
        );
    }

    proptest! {
        #[test]
        fn adjoint_is_involution(a in arb_matrix(4)) {
            prop_assert_eq!(a.adjoint().adjoint(), a);
        }

        #[test]
        fn commutator_antisymmetric_and_traceless(a in arb_matrix(3), b in arb_matrix(3)) {
            let ab = commutator(&a, &b).unwrap();
            let ba = commutator(&b, &a).unwrap();
            prop_assert!((&ab + &ba).frobenius_norm() <= 1e-14);
            prop_assert!(ab.trace().norm() <= 1e-12 * a.frobenius_norm() * b.frobenius_norm() + 1e-300);
        }

        #[test]
        fn frobenius_inner_is_conjugate_symmetric(a in arb_matrix(3), b in arb_matrix(3)) {
            let ab = frobenius_inner(&a, &b).unwrap();
            let ba = frobenius_inner(&b, &a).unwrap();
            prop_assert!((ab - ba.conj()).norm() <= 1e-14);
            let aa = frobenius_inner(&a, &a).unwrap();
            prop_assert!(aa.im.abs() <= 1e-15 && aa.re >= 0.0);
        }

        #[test]
        fn vectorization_round_trips(a in arb_matrix(3)) {
            prop_assert_eq!(ComplexMatrix::unvec_columns(3, &a.vec_columns()).unwrap(), a);
        }
    }
}
