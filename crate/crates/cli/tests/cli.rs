use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ghzw(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghzw")).current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
        .parse()
        .unwrap()
}

#[test]
fn state_files_have_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    assert!(ghzw(dir.path(), &["state", "ghz", "--n", "3", "--out", "ghz.json"]).status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("ghz.json")).unwrap()).unwrap();
    assert_eq!(v["kind"], "pure");
    let data = v["data"].as_array().unwrap();
    assert_eq!(data.len(), 8);
    let nonzero: Vec<usize> = (0..8).filter(|&i| data[i][0].as_f64().unwrap().abs() > 1e-12).collect();
    assert_eq!(nonzero, vec![0, 7]);

    let o = ghzw(dir.path(), &["state", "wprime", "--n", "4"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["data"].as_array().unwrap().len(), 16);
}

#[test]
fn too_few_qubits_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = ghzw(dir.path(), &["state", "ghz", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n must be ≥ 2"));
}

#[test]
fn filter_reports_success_probability_and_fidelity() {
    let dir = tempfile::tempdir().unwrap();
    ghzw(dir.path(), &["state", "ghz", "--n", "3", "--out", "ghz.json"]);
    let o = ghzw(dir.path(), &["filter", "--input", "ghz.json", "--a-squared", "0.38", "--out", "f.json"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!((value(&text, "success_probability") - 0.2987).abs() < 1e-4);
    assert!((value(&text, "fidelity_w_prime") - 0.9541).abs() < 1e-4);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("f.json")).unwrap()).unwrap();
    assert_eq!(doc["a_squared"], 0.38);
    assert_eq!(doc["state"]["n_qubits"], 3);

    let o = ghzw(dir.path(), &["filter", "--input", "ghz.json", "--a2", "1.0", "--out", "same.json"]);
    assert!(stdout(&o).contains("unchanged"));

    let o = ghzw(dir.path(), &["filter", "--input", "missing.json", "--a2", "0.5", "--out", "x.json"]);
    assert_eq!(o.status.code(), Some(4));
    let o = ghzw(dir.path(), &["filter", "--input", "ghz.json", "--a2", "1.5", "--out", "x.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn noiseless_round_trip_recovers_ghz() {
    let dir = tempfile::tempdir().unwrap();
    ghzw(dir.path(), &["state", "ghz", "--n", "3", "--out", "ghz.json"]);
    let o = ghzw(
        dir.path(),
        &[
            "--seed", "1", "tomo", "sim", "--input", "ghz.json", "--shots", "100000", "--noise", "none", "--out",
            "c.csv",
        ],
    );
    assert!(o.status.success());
    let o = ghzw(dir.path(), &["tomo", "reconstruct", "--counts", "c.csv", "--out", "r.json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(value(&stdout(&o), "fidelity_ghz_canonical") >= 0.999);
    // the reconstruction file is accepted wherever a state is
    let o = ghzw(
        dir.path(),
        &["--json", "--seed", "2", "analyze", "--input", "r.json", "--counts", "c.csv", "--montecarlo", "5"],
    );
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["uncertainty"]["fidelity_ghz_canonical"]["std_dev"].is_number());
}

#[test]
fn filter_output_feeds_simulation_and_json_counts() {
    let dir = tempfile::tempdir().unwrap();
    ghzw(dir.path(), &["state", "ghz", "--n", "3", "--out", "ghz.json"]);
    ghzw(dir.path(), &["filter", "--input", "ghz.json", "--a2", "0.38", "--out", "f.json"]);
    let o = ghzw(dir.path(), &["--seed", "4", "tomo", "sim", "--input", "f.json", "--peak", "120", "--out", "c.json"]);
    assert!(o.status.success());
    let recs: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    assert_eq!(recs.as_array().unwrap().len(), 64);
    let o = ghzw(dir.path(), &["tomo", "reconstruct", "--counts", "c.json", "--out", "r.json"]);
    assert!(o.status.success());
}

#[test]
fn seeded_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    ghzw(dir.path(), &["state", "w", "--n", "3", "--out", "w.json"]);
    let a = ghzw(dir.path(), &["--seed", "9", "tomo", "sim", "--input", "w.json", "--shots", "500"]);
    let b = ghzw(dir.path(), &["--seed", "9", "tomo", "sim", "--input", "w.json", "--shots", "500"]);
    assert_eq!(a.stdout, b.stdout);
    let c = ghzw(dir.path(), &["tomo", "sim", "--input", "w.json", "--shots", "500"]);
    assert!(String::from_utf8_lossy(&c.stderr).starts_with("seed="));
}

#[test]
fn pipeline_lands_near_the_analytic_fidelity() {
    let dir = tempfile::tempdir().unwrap();
    let o = ghzw(dir.path(), &["--seed", "7", "pipeline", "--n", "3", "--a2", "0.38", "--shots", "100000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!((value(&text, "output.fidelity_w_canonical") - 0.954).abs() < 0.02);
    assert!(value(&text, "input.fidelity_ghz_canonical") > 0.99);
    assert_eq!(value(&text, "seed"), 7.0);

    let o = ghzw(dir.path(), &["--json", "--seed", "7", "pipeline", "--n", "3", "--a2", "0.38", "--shots", "100000"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["output"]["fidelity_w_canonical"].as_f64().unwrap(), value(&text, "output.fidelity_w_canonical"));
    assert!(v["experimental_reference"]["w_after"].is_number());
}

#[test]
fn analyze_compares_before_and_after() {
    let dir = tempfile::tempdir().unwrap();
    ghzw(dir.path(), &["state", "ghz", "--n", "3", "--out", "ghz.json"]);
    ghzw(dir.path(), &["filter", "--input", "ghz.json", "--a2", "0.38", "--out", "f.json"]);
    let o = ghzw(
        dir.path(),
        &[
            "--seed",
            "1",
            "analyze",
            "--input",
            "f.json",
            "--before",
            "ghz.json",
            "--starts",
            "4",
            "--plot-data",
            "p.csv",
        ],
    );
    assert!(o.status.success());
    let text = stdout(&o);
    assert!((value(&text, "input.fidelity_w_canonical") - 0.75).abs() < 1e-9);
    assert!((value(&text, "output.fidelity_ghz_canonical") - 0.908).abs() < 1e-3);
    let csv = std::fs::read_to_string(dir.path().join("p.csv")).unwrap();
    assert_eq!(csv.lines().count(), 65);
    let o = ghzw(dir.path(), &["analyze", "--input", "f.json", "--montecarlo", "10"]);
    assert_eq!(o.status.code(), Some(2));
}
