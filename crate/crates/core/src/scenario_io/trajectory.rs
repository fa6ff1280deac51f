//! Trajectory files.
//!
//! CSV columns are `t`, then `re_i_j, im_i_j` for every `i ≤ j` in row order,
//! then `trace_defect, min_eig, entropy`. Floats are written in shortest
//! round-trip form. The JSON form holds `dim` and a `samples` array whose
//! objects carry the same fields, with the full matrix under `rho`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

use super::{matrix_to_json, JsonMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrajectoryFormat {
    Csv,
    Json,
}

impl TrajectoryFormat {
    /// `.json` selects JSON; anything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Self::Json,
            _ => Self::Csv,
        }
    }
}

/// One sample as read back from a file.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRecord {
    pub t: f64,
    pub rho: ComplexMatrix,
    pub trace_defect: f64,
    pub min_eig: f64,
    pub entropy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub dim: usize,
    pub samples: Vec<SampleRecord>,
}

impl TrajectoryRecord {
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let samples = traj
            .times
            .iter()
            .zip(&traj.states)
            .zip(&traj.diagnostics)
            .map(|((&t, s), d)| SampleRecord {
                t,
                rho: s.matrix().clone(),
                trace_defect: d.trace_defect,
                min_eig: d.min_eigenvalue,
                entropy: d.entropy,
            })
            .collect();
        Self {
            dim: traj.dim,
            samples,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonTrajectory {
    dim: usize,
    samples: Vec<JsonSample>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonSample {
    t: f64,
    rho: JsonMatrix,
    trace_defect: f64,
    min_eig: f64,
    entropy: f64,
}

fn upper_pairs(dim: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..dim).flat_map(move |i| (i..dim).map(move |j| (i, j)))
}

fn csv_header(dim: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for (i, j) in upper_pairs(dim) {
        h.push(format!("re_{i}_{j}"));
        h.push(format!("im_{i}_{j}"));
    }
    h.extend(["trace_defect", "min_eig", "entropy"].map(String::from));
    h
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(format!("{other:?}")),
    }
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(csv_header(traj.dim))
        .expect("in-memory write");
    for rec in TrajectoryRecord::from_trajectory(traj).samples {
        let mut row = vec![format!("{:?}", rec.t)];
        for (i, j) in upper_pairs(traj.dim) {
            let z = rec.rho[(i, j)];
            row.push(format!("{:?}", z.re));
            row.push(format!("{:?}", z.im));
        }
        row.extend([rec.trace_defect, rec.min_eig, rec.entropy].map(|x| format!("{x:?}")));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn trajectory_json(traj: &Trajectory) -> String {
    let rec = TrajectoryRecord::from_trajectory(traj);
    let doc = JsonTrajectory {
        dim: rec.dim,
        samples: rec
            .samples
            .iter()
            .map(|s| JsonSample {
                t: s.t,
                rho: matrix_to_json(&s.rho),
                trace_defect: s.trace_defect,
                min_eig: s.min_eig,
                entropy: s.entropy,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("trajectory documents always serialize")
}

pub fn save_trajectory(
    traj: &Trajectory,
    format: TrajectoryFormat,
    path: impl AsRef<Path>,
) -> Result<()> {
    let text = match format {
        TrajectoryFormat::Csv => trajectory_csv(traj),
        TrajectoryFormat::Json => trajectory_json(traj) + "\n",
    };
    std::fs::write(path, text)?;
    Ok(())
}

fn parse_csv(text: &str) -> Result<TrajectoryRecord> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_error)?.clone();
    // header has 1 + d(d+1) + 3 columns
    let pair_cols = header
        .len()
        .checked_sub(4)
        .ok_or_else(|| Error::Format("short header".into()))?;
    let dim = (0..=pair_cols)
        .find(|d| d * (d + 1) == pair_cols)
        .ok_or_else(|| Error::Format(format!("{} columns match no dimension", header.len())))?;
    if header.iter().ne(csv_header(dim).iter().map(String::as_str)) {
        return Err(Error::Format("unexpected trajectory header".into()));
    }
    let mut samples = Vec::new();
    for (row_no, row) in r.records().enumerate() {
        let row = row.map_err(csv_error)?;
        let vals = row
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Parse {
                line: row_no + 2,
                column: 0,
                message: e.to_string(),
            })?;
        let mut rho = ComplexMatrix::zeros(dim);
        for (k, (i, j)) in upper_pairs(dim).enumerate() {
            let z = C64::new(vals[1 + 2 * k], vals[2 + 2 * k]);
            rho[(i, j)] = z;
            rho[(j, i)] = z.conj();
        }
        let n = vals.len();
        samples.push(SampleRecord {
            t: vals[0],
            rho,
            trace_defect: vals[n - 3],
            min_eig: vals[n - 2],
            entropy: vals[n - 1],
        });
    }
    Ok(TrajectoryRecord { dim, samples })
}

fn parse_json(text: &str) -> Result<TrajectoryRecord> {
    let doc: JsonTrajectory = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let samples = doc
        .samples
        .into_iter()
        .map(|s| {
            let rows: Vec<Vec<C64>> = s
                .rho
                .iter()
                .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
                .collect();
            let rho = ComplexMatrix::from_rows(&rows)?;
            if rho.dim() != doc.dim {
                return Err(Error::DimensionMismatch {
                    expected: doc.dim,
                    found: rho.dim(),
                });
            }
            Ok(SampleRecord {
                t: s.t,
                rho,
                trace_defect: s.trace_defect,
                min_eig: s.min_eig,
                entropy: s.entropy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrajectoryRecord {
        dim: doc.dim,
        samples,
    })
}

pub fn load_trajectory(
    path: impl AsRef<Path>,
    format: TrajectoryFormat,
) -> Result<TrajectoryRecord> {
    let text = std::fs::read_to_string(path)?;
    match format {
        TrajectoryFormat::Csv => parse_csv(&text),
        TrajectoryFormat::Json => parse_json(&text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::integrate;
    use crate::scenario_io::qubit_scenario;

    fn two_sample() -> Trajectory {
        let sc = qubit_scenario(1.0, 1.0);
        integrate(&sc.system, &sc.initial_state, 0.3, 0.3).unwrap()
    }

    #[test]
    fn csv_shape() {
        let traj = two_sample();
        assert_eq!(traj.len(), 2);
        let text = trajectory_csv(&traj);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        for l in &lines {
            assert_eq!(l.split(',').count(), 2 * 3 + 4);
        }
        assert_eq!(
            lines[0],
            "t,re_0_0,im_0_0,re_0_1,im_0_1,re_1_1,im_1_1,trace_defect,min_eig,entropy"
        );
    }

    #[test]
    fn empty_trajectory_is_header_only() {
        let traj = Trajectory::from_states(2, vec![], vec![]).unwrap();
        let text = trajectory_csv(&traj);
        assert_eq!(text.lines().count(), 1);
        let back = parse_csv(&text).unwrap();
        assert_eq!(back.dim, 2);
        assert!(back.samples.is_empty());
    }

    #[test]
    fn round_trips_are_exact() {
        let traj = two_sample();
        let want = TrajectoryRecord::from_trajectory(&traj);
        let from_json = parse_json(&trajectory_json(&traj)).unwrap();
        let from_csv = parse_csv(&trajectory_csv(&traj)).unwrap();
        for got in [from_json, from_csv] {
            assert_eq!(got.dim, want.dim);
            for (a, b) in got.samples.iter().zip(&want.samples) {
                assert!((&a.rho - &b.rho).max_abs() <= 1e-15);
                assert_eq!(a.t, b.t);
                assert_eq!(a.entropy, b.entropy);
                assert_eq!(a.min_eig, b.min_eig);
                assert_eq!(a.trace_defect, b.trace_defect);
            }
        }
    }

    #[test]
    fn bad_header_is_rejected() {
        assert!(matches!(parse_csv("t,x,y,z,w\n"), Err(Error::Format(_))));
    }
}
