//! Seeded generator for reproducible random fixtures.
//!
//! A plain 64-bit linear congruential generator,
//!
//! ```text
//! state ← state · 6364136223846793005 + 1442695040888963407   (mod 2⁶⁴)
//! ```
//!
//! seeded with `state = seed`. Each draw advances the state once and returns
//! it; uniforms use its top 53 bits, `u = (state >> 11) · 2⁻⁵³ ∈ [0, 1)`.
//! The constants are Knuth's MMIX multiplier and increment, so any language
//! with wrapping 64-bit arithmetic reproduces the same fixtures.

use std::f64::consts::TAU;

use crate::matrix::{ComplexMatrix, C64};

pub const MULTIPLIER: u64 = 6364136223846793005;
pub const INCREMENT: u64 = 1442695040888963407;

#[derive(Clone, Debug)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        self.state
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform on the closed unit disc: radius `√u₁`, angle `2πu₂`.
    pub fn unit_disc(&mut self) -> C64 {
        let r = self.uniform().sqrt();
        let theta = TAU * self.uniform();
        C64::from_polar(r, theta)
    }

    /// Index in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    /// Matrix with entries drawn row-major from the unit disc.
    pub fn disc_matrix(&mut self, dim: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(dim, |_, _| self.unit_disc())
    }

    /// `(A + A†)/2` with `A` from [`Lcg64::disc_matrix`].
    pub fn hermitian(&mut self, dim: usize) -> ComplexMatrix {
        self.disc_matrix(dim).hermitian_part()
    }

    /// `AA†/Tr(AA†)` with `A` from [`Lcg64::disc_matrix`]; full rank almost surely.
    pub fn density(&mut self, dim: usize) -> ComplexMatrix {
        let a = self.disc_matrix(dim);
        let rho = &a * &a.adjoint();
        let tr = rho.trace().re;
        rho.scale_real(1.0 / tr).hermitian_part()
    }

    /// Orthonormal basis: `dim` disc-valued vectors, orthonormalized in order
    /// by two passes of modified Gram-Schmidt.
    pub fn orthonormal_vectors(&mut self, dim: usize) -> Vec<Vec<C64>> {
        let mut out: Vec<Vec<C64>> = Vec::with_capacity(dim);
        while out.len() < dim {
            let mut w: Vec<C64> = (0..dim).map(|_| self.unit_disc()).collect();
            for _ in 0..2 {
                for q in &out {
                    let proj = crate::matrix::inner(q, &w);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= proj * qi;
                    }
                }
            }
            let norm = crate::matrix::vec_norm(&w);
            // a draw nearly inside the span so far is discarded
            if norm < 1e-6 {
                continue;
            }
            w.iter_mut().for_each(|z| *z /= norm);
            out.push(w);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_draws_are_pinned() {
        let mut rng = Lcg64::new(0);
        assert_eq!(rng.next_u64(), INCREMENT);
        assert_eq!(
            rng.next_u64(),
            INCREMENT.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT)
        );
    }

    #[test]
    fn draws_are_in_range() {
        let mut rng = Lcg64::new(42);
        for _ in 0..10_000 {
            let u = rng.uniform();
            assert!((0.0..1.0).contains(&u));
            assert!(rng.unit_disc().norm() <= 1.0);
            assert!(rng.below(3) < 3);
        }
    }

    #[test]
    fn fixtures_are_valid() {
        let mut rng = Lcg64::new(9);
        let vs = rng.orthonormal_vectors(4);
        for (i, u) in vs.iter().enumerate() {
            for (j, v) in vs.iter().enumerate() {
                let g = crate::matrix::inner(u, v);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - want).norm() < 1e-14);
            }
        }
        let rho = rng.density(3);
        assert!((rho.trace().re - 1.0).abs() < 1e-14);
        assert!(crate::matrix::min_eigenvalue_hermitian(&rho).unwrap() > 0.0);
    }
}
