//! End-to-end runs of the `lindblad` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use lindblad_core::dynamics::DensityMatrix;
use lindblad_core::scenario_io::{
    load_trajectory, qubit_scenario, save_scenario, Scenario, TrajectoryFormat, TrajectoryRecord,
};

fn lindblad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lindblad"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> (i32, Value) {
    let out = lindblad(args);
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}\n{text}"));
    (out.status.code().unwrap(), v)
}

fn write(dir: &Path, sc: &Scenario) -> String {
    let p: PathBuf = dir.join(format!("{}.json", sc.name));
    save_scenario(sc, &p).unwrap();
    p.display().to_string()
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn spectrum_of_driven_qubit() {
    let (code, v) = json_of(&["spectrum", "--builtin", "qubit-l1-h1", "--json"]);
    assert_eq!(code, 0);
    let eig: Vec<(f64, f64)> = v["modes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| complex(&m["eigenvalue"]))
        .collect();
    let s3 = 3f64.sqrt();
    let want = [(0.0, 0.0), (-1.0, -s3), (-1.0, s3), (-2.0, 0.0)];
    for ((re, im), (wre, wim)) in eig.iter().zip(want) {
        assert!(
            (re - wre).abs() < 1e-8 && (im - wim).abs() < 1e-8,
            "{eig:?}"
        );
    }
    for m in v["modes"].as_array().unwrap() {
        assert!(m["identity_check"]["max_deviation"].as_f64().unwrap() <= 1e-7);
    }
    assert!((v["decay_gap"].as_f64().unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn spectrum_of_zero_generator() {
    let (code, v) = json_of(&["spectrum", "--builtin", "zero-generator", "--json"]);
    assert_eq!(code, 0);
    assert!(v["decay_gap"].is_null());
    for m in v["modes"].as_array().unwrap() {
        assert_eq!(complex(&m["eigenvalue"]), (0.0, 0.0));
    }
    let human =
        String::from_utf8(lindblad(&["spectrum", "--builtin", "zero-generator"]).stdout).unwrap();
    assert!(human.contains("decay gap: inf"));
}

#[test]
fn certify_reports_hamiltonian_defect() {
    let (code, v) = json_of(&["certify", "--builtin", "qubit-l1-h1", "--json"]);
    assert_eq!(code, 1);
    let defect = v["hamiltonian_reconstruction_defect"].as_f64().unwrap();
    assert!((defect - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["passed"], Value::Bool(false));

    let (code, v) = json_of(&[
        "certify",
        "--builtin",
        "two-spin-classes-mismatched",
        "--json",
    ]);
    assert_eq!(code, 1);
    assert!(v["failures"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f == "jump class constancy"));
}

#[test]
fn closed_form_file_shows_dephasing_rate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cf.csv");
    let o = out.to_str().unwrap();
    assert_eq!(
        lindblad(&[
            "evolve",
            "--builtin",
            "qubit-l1-h0",
            "--method",
            "closed-form",
            "--out",
            o
        ])
        .status
        .code(),
        Some(0)
    );
    let rec = load_trajectory(&out, TrajectoryFormat::Csv).unwrap();
    assert_eq!(rec.samples.len(), 1001);
    for s in &rec.samples {
        let want = 0.5 * (-2.0 * s.t).exp();
        assert!((s.rho[(0, 1)].re - want).abs() <= 1e-14, "t = {}", s.t);
    }
}

#[test]
fn integrate_and_closed_form_files_agree() {
    let dir = tempfile::tempdir().unwrap();
    let read = |method: &str, name: &str| -> TrajectoryRecord {
        let out = dir.path().join(name);
        let code = lindblad(&[
            "evolve",
            "--builtin",
            "random-apparatus-d3-n2-seed-20",
            "--method",
            method,
            "--out",
            out.to_str().unwrap(),
        ])
        .status
        .code();
        assert_eq!(code, Some(0));
        load_trajectory(&out, TrajectoryFormat::from_path(&out)).unwrap()
    };
    let a = read("integrate", "a.csv");
    let b = read("closed-form", "b.json");
    let c = read("spectral", "c.csv");
    assert_eq!(a.samples.len(), b.samples.len());
    for ((x, y), z) in a.samples.iter().zip(&b.samples).zip(&c.samples) {
        assert_eq!(x.t, y.t);
        assert!((&x.rho - &y.rho).frobenius_norm() <= 1e-6);
        assert!((&z.rho - &y.rho).frobenius_norm() <= 1e-6);
    }
}

#[test]
fn zero_duration_gives_the_initial_state() {
    let dir = tempfile::tempdir().unwrap();
    let mut sc = qubit_scenario(1.0, 0.0);
    sc.t_end = 0.0;
    sc.name = "instant".into();
    let path = write(dir.path(), &sc);
    for method in ["integrate", "spectral", "closed-form"] {
        let out = dir.path().join(format!("{method}.csv"));
        let code = lindblad(&[
            "evolve",
            "--scenario",
            &path,
            "--method",
            method,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code.status.code(), Some(0));
        let rec = load_trajectory(&out, TrajectoryFormat::Csv).unwrap();
        assert_eq!(rec.samples.len(), 1);
        assert_eq!(rec.samples[0].t, 0.0);
        assert_eq!(&rec.samples[0].rho, sc.initial_state.matrix());
    }
}

#[test]
fn collapse_reports_born_probabilities() {
    let (code, v) = json_of(&["collapse", "--builtin", "qubit-l1-h0", "--json"]);
    assert_eq!(code, 0);
    assert!(v["deviation"].as_f64().unwrap() <= 1e-6);
    assert_eq!(v["t"].as_f64().unwrap(), 20.0);
    for p in v["probabilities"]
        .as_array()
        .unwrap()
        .iter()
        .chain(v["born_probabilities"].as_array().unwrap())
    {
        assert!((p.as_f64().unwrap() - 0.5).abs() <= 1e-10);
    }

    let (code, v) = json_of(&["collapse", "--builtin", "two-spin-classes", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["complete"], Value::Bool(false));
    assert_eq!(v["class_probabilities"], serde_json::json!([0.5, 0.5]));
}

#[test]
fn collapse_of_a_collapsed_state_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let mut sc = qubit_scenario(1.0, 0.0);
    sc.initial_state = DensityMatrix::maximally_mixed(2);
    sc.name = "already-collapsed".into();
    let path = write(dir.path(), &sc);
    let (code, v) = json_of(&["collapse", "--scenario", &path, "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["deviation"].as_f64().unwrap(), 0.0);
}

#[test]
fn entropy_checks() {
    let (code, v) = json_of(&["entropy-check", "--builtin", "qubit-l1-h1", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["entropy_condition_holds"], Value::Bool(true));
    assert!(v["min_entropy_increment"].as_f64().unwrap() >= -1e-8);
    assert!((v["final_entropy"].as_f64().unwrap() - std::f64::consts::LN_2).abs() <= 1e-6);

    let (code, v) = json_of(&["entropy-check", "--builtin", "raising-operator", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["entropy_condition_holds"], Value::Bool(false));
    assert_eq!(v["entropy_decreased"], Value::Bool(true));

    let (code, v) = json_of(&["entropy-check", "--builtin", "zero-generator", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["min_entropy_increment"].as_f64().unwrap(), 0.0);
}

#[test]
fn demo_qubit_writes_loadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_of(&[
        "demo-qubit",
        "--json",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 3);
    for e in entries {
        assert!(e["max_mismatch"].as_f64().unwrap() <= 1e-8);
        let name = e["name"].as_str().unwrap();
        lindblad_core::scenario_io::load_scenario(dir.path().join(format!("{name}.json"))).unwrap();
    }
}

#[test]
fn malformed_scenarios_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ \"name\": \"x\", ").unwrap();
    let out = lindblad(&["spectrum", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line"));
    assert_eq!(lindblad(&["--help"]).status.code(), Some(0));
    assert_eq!(
        lindblad(&["collapse", "--builtin", "qubit-l1-h0", "--t-factor", "-1"])
            .status
            .code(),
        Some(2)
    );
}
