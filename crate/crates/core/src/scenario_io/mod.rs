//! Scenario documents, trajectory files and built-in fixtures.
//!
//! A scenario is one JSON object:
//!
//! ```json
//! {
//!   "name": "qubit-l1-h0",
//!   "dim": 2,
//!   "hamiltonian": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]],
//!   "jumps": [ [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]] ],
//!   "basis_vectors": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
//!   "classes": [[0], [1]],
//!   "initial_state": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]],
//!   "t_end": 10.0,
//!   "dt": 0.001
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are arrays of rows.
//! `basis_vectors` and `classes` may be `null` or absent; classes default to
//! singletons and their indices are zero-based.

mod builtin;
mod trajectory;

pub use builtin::{
    builtin_scenarios, qubit_scenario, random_apparatus, random_balanced_system,
    random_nonmeasurement_system, BuiltinScenario,
};
pub use trajectory::{
    load_trajectory, save_trajectory, trajectory_csv, trajectory_json, SampleRecord,
    TrajectoryFormat, TrajectoryRecord,
};

use std::path::Path;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::dynamics::DensityMatrix;
use crate::error::{Error, Result};
use crate::liouvillian::LindbladSystem;
use crate::matrix::{ComplexMatrix, C64};
use crate::measurement::{basis_from_vectors, singleton_classes, MeasurementBasis};

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

/// Everything needed to run one experiment.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub system: LindbladSystem,
    pub basis: Option<MeasurementBasis>,
    pub initial_state: DensityMatrix,
    pub t_end: f64,
    pub dt: f64,
}

impl Scenario {
    pub fn dim(&self) -> usize {
        self.system.dim()
    }

    pub fn to_document(&self) -> ScenarioDocument {
        ScenarioDocument {
            name: self.name.clone(),
            dim: self.dim(),
            hamiltonian: matrix_to_json(self.system.hamiltonian()),
            jumps: self.system.jumps().iter().map(matrix_to_json).collect(),
            basis_vectors: self.basis.as_ref().map(|b| {
                b.source_vectors()
                    .iter()
                    .map(|v| v.iter().map(complex_to_json).collect())
                    .collect()
            }),
            classes: self.basis.as_ref().map(|b| b.classes().to_vec()),
            initial_state: matrix_to_json(self.initial_state.matrix()),
            t_end: self.t_end,
            dt: self.dt,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document())
            .expect("scenario documents always serialize")
    }
}

/// The on-disk shape of a [`Scenario`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub name: String,
    pub dim: usize,
    pub hamiltonian: JsonMatrix,
    pub jumps: Vec<JsonMatrix>,
    #[serde(default)]
    pub basis_vectors: Option<Vec<Vec<JsonComplex>>>,
    #[serde(default)]
    pub classes: Option<Vec<Vec<usize>>>,
    pub initial_state: JsonMatrix,
    pub t_end: f64,
    pub dt: f64,
}

fn complex_to_json(z: &C64) -> JsonComplex {
    [z.re, z.im]
}

fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    m.rows()
        .iter()
        .map(|row| row.iter().map(complex_to_json).collect())
        .collect()
}

fn invalid(field: impl Into<String>, message: impl Into<String>, defect: f64) -> Error {
    Error::InvalidField {
        field: field.into(),
        message: message.into(),
        defect,
    }
}

fn matrix_from_json(field: &str, dim: usize, m: &JsonMatrix) -> Result<ComplexMatrix> {
    if m.len() != dim || m.iter().any(|row| row.len() != dim) {
        return Err(invalid(
            field,
            format!("expected a {dim}x{dim} matrix"),
            0.0,
        ));
    }
    let rows: Vec<Vec<C64>> = m
        .iter()
        .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    let matrix = ComplexMatrix::from_rows(&rows).map_err(|e| invalid(field, e.to_string(), 0.0))?;
    if let Some(bad) = matrix
        .as_slice()
        .iter()
        .find(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(invalid(field, "non-finite entry", bad.norm()));
    }
    Ok(matrix)
}

impl ScenarioDocument {
    /// Validates every matrix and builds the scenario.
    pub fn into_scenario(self) -> Result<Scenario> {
        let d = self.dim;
        if d == 0 {
            return Err(invalid("dim", "dimension must be at least 1", 0.0));
        }
        let hamiltonian = matrix_from_json("hamiltonian", d, &self.hamiltonian)?;
        let defect = hamiltonian.hermiticity_defect();
        if defect > crate::tolerance::HERMITIAN_REL * (1.0 + hamiltonian.frobenius_norm()) {
            return Err(invalid("hamiltonian", "not Hermitian", defect));
        }
        let jumps = self
            .jumps
            .iter()
            .enumerate()
            .map(|(n, m)| matrix_from_json(&format!("jumps[{n}]"), d, m))
            .collect::<Result<Vec<_>>>()?;
        let system = LindbladSystem::new(hamiltonian, jumps)
            .map_err(|e| invalid("jumps", e.to_string(), 0.0))?;

        let rho = matrix_from_json("initial_state", d, &self.initial_state)?;
        let initial_state = DensityMatrix::new(rho).map_err(|e| match e {
            Error::InvalidDensity { reason, defect } => invalid("initial_state", reason, defect),
            other => invalid("initial_state", other.to_string(), 0.0),
        })?;

        let basis = match self.basis_vectors {
            Some(vectors) => {
                if vectors.len() != d || vectors.iter().any(|v| v.len() != d) {
                    return Err(invalid(
                        "basis_vectors",
                        format!("expected {d} vectors of length {d}"),
                        0.0,
                    ));
                }
                let vectors: Vec<Vec<C64>> = vectors
                    .iter()
                    .map(|v| v.iter().map(|&[re, im]| C64::new(re, im)).collect())
                    .collect();
                let classes = self.classes.unwrap_or_else(|| singleton_classes(d));
                Some(basis_from_vectors(vectors, classes).map_err(|e| match e {
                    Error::NotOrthonormal { defect } => {
                        invalid("basis_vectors", "not orthonormal", defect)
                    }
                    Error::Partition(msg) => invalid("classes", msg, 0.0),
                    other => invalid("basis_vectors", other.to_string(), 0.0),
                })?)
            }
            None => {
                if self.classes.is_some() {
                    return Err(invalid(
                        "classes",
                        "classes given without basis_vectors",
                        0.0,
                    ));
                }
                None
            }
        };

        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(invalid(
                "t_end",
                "must be finite and non-negative",
                self.t_end,
            ));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(invalid("dt", "must be finite and positive", self.dt));
        }

        Ok(Scenario {
            name: self.name,
            system,
            basis,
            initial_state,
            t_end: self.t_end,
            dt: self.dt,
        })
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let doc: ScenarioDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.into_scenario()
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    let mut text = scenario.to_json();
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Serializes rows of complex numbers as nested `[re, im]` arrays.
pub fn serialize_complex_rows<S: Serializer>(rows: &[Vec<C64>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for row in rows {
        let row: Vec<JsonComplex> = row.iter().map(complex_to_json).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

pub fn complex_json(z: C64) -> JsonComplex {
    complex_to_json(&z)
}
