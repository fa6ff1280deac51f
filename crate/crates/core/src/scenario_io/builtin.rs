//! Built-in scenarios and seeded random generators.
//!
//! Random fixtures consume [`Lcg64`] draws in a fixed order so that any
//! implementation of the generator reproduces them:
//!
//! * apparatus: basis vectors ([`Lcg64::orthonormal_vectors`]), then `ℓ`
//!   row by row from the unit disc, then `h_α` uniform on `[−1, 1)`, then the
//!   initial state ([`Lcg64::density`]);
//! * non-measurement system: `H` ([`Lcg64::hermitian`]), the jumps
//!   ([`Lcg64::disc_matrix`] each), then the initial state;
//! * balanced system: `H`, then per jump a kind draw in `0..3` followed by
//!   the kind's own draws.

use crate::dynamics::DensityMatrix;
use crate::liouvillian::LindbladSystem;
use crate::matrix::{pauli, ComplexMatrix, C64, ONE, ZERO};
use crate::measurement::{
    basis_from_vectors, singleton_classes, ApparatusCoefficients, MeasurementBasis,
};
use crate::rng::Lcg64;

use super::Scenario;

/// A scenario plus the certification verdict it is expected to produce.
#[derive(Clone, Debug)]
pub struct BuiltinScenario {
    pub scenario: Scenario,
    pub expect_pass: bool,
}

const DEMO_T_END: f64 = 10.0;
const DEMO_DT: f64 = 1e-3;

fn fmt_param(x: f64) -> String {
    format!("{x}")
}

/// `L = ℓσ₃`, `H = hσ₁`, measured in the σ₃ basis from `ρ₀ = (I + σ₁)/2`.
pub fn qubit_scenario(ell: f64, h: f64) -> Scenario {
    let system = LindbladSystem::new(
        pauli::sigma_x().scale_real(h),
        vec![pauli::sigma_z().scale_real(ell)],
    )
    .expect("qubit system is well formed");
    Scenario {
        name: format!("qubit-l{}-h{}", fmt_param(ell), fmt_param(h)),
        system,
        basis: Some(MeasurementBasis::standard(2)),
        initial_state: DensityMatrix::new(
            ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap(),
        )
        .unwrap(),
        t_end: DEMO_T_END,
        dt: DEMO_DT,
    }
}

/// Two qubits measured only through the first spin: `L = diag(1,1,−1,−1) = 2H`,
/// classes `{0,1}` and `{2,3}`, starting from `|++⟩`. With `mismatch ≠ 0` the
/// second entry of `L` becomes `1 + mismatch`, breaking class constancy.
fn class_scenario(name: &str, mismatch: f64) -> Scenario {
    let ell = vec![vec![
        C64::new(1.0, 0.0),
        C64::new(1.0 + mismatch, 0.0),
        C64::new(-1.0, 0.0),
        C64::new(-1.0, 0.0),
    ]];
    let coeffs = ApparatusCoefficients::new(ell, vec![0.5, 0.5, -0.5, -0.5]).unwrap();
    let basis = basis_from_vectors(standard_vectors(4), vec![vec![0, 1], vec![2, 3]]).unwrap();
    let system = coeffs.system(&basis).unwrap();
    let psi = [C64::new(0.5, 0.0); 4];
    Scenario {
        name: name.to_string(),
        system,
        basis: Some(basis),
        initial_state: DensityMatrix::pure(&psi).unwrap(),
        t_end: DEMO_T_END,
        dt: DEMO_DT,
    }
}

fn standard_vectors(d: usize) -> Vec<Vec<C64>> {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { ONE } else { ZERO }).collect())
        .collect()
}

/// Apparatus built directly from random coefficients in a random basis, so it
/// certifies by construction. Returns the scenario and its coefficients.
pub fn random_apparatus(seed: u64, dim: usize, jumps: usize) -> (Scenario, ApparatusCoefficients) {
    let mut rng = Lcg64::new(seed);
    let vectors = rng.orthonormal_vectors(dim);
    let ell: Vec<Vec<C64>> = (0..jumps)
        .map(|_| (0..dim).map(|_| rng.unit_disc()).collect())
        .collect();
    let h: Vec<f64> = (0..dim).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
    let rho = rng.density(dim);
    let coeffs = ApparatusCoefficients::new(ell, h).unwrap();
    let basis = basis_from_vectors(vectors, singleton_classes(dim))
        .expect("generated vectors are orthonormal");
    let system = coeffs.system(&basis).unwrap();
    let scenario = Scenario {
        name: format!("random-apparatus-d{dim}-n{jumps}-seed-{seed}"),
        system,
        basis: Some(basis),
        initial_state: DensityMatrix::new(rho).expect("generated density is valid"),
        t_end: DEMO_T_END,
        dt: DEMO_DT,
    };
    (scenario, coeffs)
}

/// Generic jumps: almost surely neither diagonal in any basis nor balanced.
pub fn random_nonmeasurement_system(seed: u64, dim: usize, jumps: usize) -> Scenario {
    let mut rng = Lcg64::new(seed);
    let h = rng.hermitian(dim);
    let ls = (0..jumps).map(|_| rng.disc_matrix(dim)).collect();
    let rho = rng.density(dim);
    Scenario {
        name: format!("random-nonmeasurement-d{dim}-n{jumps}-seed-{seed}"),
        system: LindbladSystem::new(h, ls).unwrap(),
        basis: Some(MeasurementBasis::standard(dim)),
        initial_state: DensityMatrix::new(rho).expect("generated density is valid"),
        t_end: DEMO_T_END,
        dt: DEMO_DT,
    }
}

/// Jumps with `Σ L†L = Σ LL†` by construction. Each jump is, by a draw in
/// `0..3`, Hermitian, normal (`U diag(z) U†`), or an `A, A†` pair, the pair
/// counting as two jumps. Returns the system and a random initial state.
pub fn random_balanced_system(
    seed: u64,
    dim: usize,
    jumps: usize,
) -> (LindbladSystem, DensityMatrix) {
    let mut rng = Lcg64::new(seed);
    let h = rng.hermitian(dim);
    let mut ls = Vec::with_capacity(jumps + 1);
    while ls.len() < jumps {
        match rng.below(3) {
            0 => ls.push(rng.hermitian(dim)),
            1 => {
                let vs = rng.orthonormal_vectors(dim);
                let mut m = ComplexMatrix::zeros(dim);
                for v in &vs {
                    m += &ComplexMatrix::outer(v, v).scale(rng.unit_disc());
                }
                ls.push(m);
            }
            _ => {
                let a = rng.disc_matrix(dim);
                ls.push(a.adjoint());
                ls.push(a);
            }
        }
    }
    let rho = rng.density(dim);
    (
        LindbladSystem::new(h, ls).unwrap(),
        DensityMatrix::new(rho).expect("generated density is valid"),
    )
}

pub const BUILTIN_SEED: u64 = 20;

/// The fixed catalogue used by the CLI and the tests.
pub fn builtin_scenarios() -> Vec<BuiltinScenario> {
    let raising = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
    let mut out = vec![
        BuiltinScenario {
            scenario: qubit_scenario(1.0, 0.0),
            expect_pass: true,
        },
        BuiltinScenario {
            scenario: qubit_scenario(1.0, 1.0),
            expect_pass: false,
        },
        BuiltinScenario {
            scenario: qubit_scenario(1.0, 0.4),
            expect_pass: false,
        },
        BuiltinScenario {
            scenario: class_scenario("two-spin-classes", 0.0),
            expect_pass: true,
        },
        BuiltinScenario {
            scenario: class_scenario("two-spin-classes-mismatched", 0.5),
            expect_pass: false,
        },
        BuiltinScenario {
            scenario: random_apparatus(BUILTIN_SEED, 3, 2).0,
            expect_pass: true,
        },
        BuiltinScenario {
            scenario: random_nonmeasurement_system(BUILTIN_SEED, 3, 2),
            expect_pass: false,
        },
    ];
    out.push(BuiltinScenario {
        scenario: Scenario {
            name: "raising-operator".into(),
            system: LindbladSystem::new(ComplexMatrix::zeros(2), vec![raising]).unwrap(),
            basis: Some(MeasurementBasis::standard(2)),
            initial_state: DensityMatrix::maximally_mixed(2),
            t_end: DEMO_T_END,
            dt: DEMO_DT,
        },
        expect_pass: false,
    });
    out.push(BuiltinScenario {
        scenario: Scenario {
            name: "zero-generator".into(),
            system: LindbladSystem::new(ComplexMatrix::zeros(2), vec![]).unwrap(),
            basis: Some(MeasurementBasis::standard(2)),
            initial_state: qubit_scenario(1.0, 0.0).initial_state,
            t_end: 1.0,
            dt: DEMO_DT,
        },
        expect_pass: true,
    });
    out
}
