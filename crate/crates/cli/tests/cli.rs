use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use imaginarity::gaussian::{one_mode_from_params, GaussianState, OneModeParams};
use imaginarity::states::{BlochVector, DensityMatrix};
use serde_json::Value;
use tempfile::TempDir;

fn imag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imag"))
        .args(args)
        .env_remove("IMAG_SEED")
        .output()
        .unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn measure_maximally_mixed_is_zero() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "mixed.json",
        &DensityMatrix::maximally_mixed(2).to_json_string(),
    );
    let out = imag(&["measure", arg(&f), "--measure", "all"]);
    assert!(out.status.success());
    let records = json_lines(&out);
    let names: Vec<&str> = records
        .iter()
        .map(|r| r["measure"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["tsallis", "trace", "relent", "fidelity"]);
    for r in &records {
        assert!(num(&r["value"]).abs() <= 1e-12, "{r}");
    }
}

#[test]
fn measure_example_qubit() {
    let dir = TempDir::new().unwrap();
    let rho = DensityMatrix::from_bloch(BlochVector::new(0.0, 0.6, 0.0).unwrap());
    let f = write(&dir, "q.json", &rho.to_json_string());
    let out = imag(&["measure", arg(&f), "--measure", "tsallis", "--mu", "0.5"]);
    assert!(out.status.success());
    let records = json_lines(&out);
    assert_eq!(records.len(), 1);
    assert_eq!(num(&records[0]["mu"]), 0.5);
    assert!((num(&records[0]["value"]) - 0.2).abs() <= 1e-9);
    // Trace-norm measure of this state is 2|y| = 1.2.
    let out = imag(&["measure", arg(&f), "--measure", "trace"]);
    let r = &json_lines(&out)[0];
    assert!(r["mu"].is_null());
    assert!((num(&r["value"]) - 1.2).abs() <= 1e-12);
}

#[test]
fn measure_exit_codes() {
    let dir = TempDir::new().unwrap();
    let malformed = write(&dir, "bad.json", "{\"dim\": 2, \"matrix\": [[");
    assert_eq!(imag(&["measure", arg(&malformed)]).status.code(), Some(2));

    let missing = dir.path().join("absent.json");
    assert_eq!(imag(&["measure", arg(&missing)]).status.code(), Some(2));

    let shape = write(&dir, "shape.json", r#"{"dim": 2, "matrix": [[[1,0]]]}"#);
    assert_eq!(imag(&["measure", arg(&shape)]).status.code(), Some(2));

    let not_hermitian = write(
        &dir,
        "nh.json",
        r#"{"dim": 2, "matrix": [[[0.5,0],[0.3,0]],[[0,0],[0.5,0]]]}"#,
    );
    let out = imag(&["measure", arg(&not_hermitian)]);
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&out.stderr).to_lowercase();
    assert!(msg.contains("hermitian"), "{msg}");

    let bad_trace = write(&dir, "tr.json", r#"{"dim": 1, "matrix": [[[2,0]]]}"#);
    let out = imag(&["measure", arg(&bad_trace)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr)
        .to_lowercase()
        .contains("trace"));

    let ok = write(
        &dir,
        "ok.json",
        &DensityMatrix::maximally_mixed(2).to_json_string(),
    );
    assert_eq!(
        imag(&["measure", arg(&ok), "--mu", "1.5"]).status.code(),
        Some(3)
    );
    assert_eq!(
        imag(&["measure", arg(&ok), "--measure", "bogus"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gaussian_command() {
    let dir = TempDir::new().unwrap();
    let thermal = write(
        &dir,
        "th.json",
        &GaussianState::thermal(&[2.0]).unwrap().to_json_string(),
    );
    let out = imag(&["gaussian", arg(&thermal)]);
    assert!(out.status.success());
    let r = &json_lines(&out)[0];
    assert!(num(&r["value"]).abs() <= 1e-12);
    assert_eq!(r["symplectic_eigenvalues"].as_array().unwrap().len(), 1);
    assert!((num(&r["symplectic_eigenvalues"][0]) - 2.0).abs() <= 1e-12);

    let squeezed = OneModeParams::from_mean(0.0, 0.0, 0.5, FRAC_PI_2, 1.0);
    let g = one_mode_from_params(&squeezed).unwrap();
    let f = write(&dir, "sq.json", &g.to_json_string());
    let out = imag(&["gaussian", arg(&f), "--mu", "0.5"]);
    let v = num(&json_lines(&out)[0]["value"]);
    assert!((v - (1.0 - 1.0 / 1f64.cosh())).abs() <= 1e-9);

    let unphysical = write(
        &dir,
        "half.json",
        r#"{"modes": 1, "mean": [0, 0], "cov": [[0.5, 0], [0, 0.5]]}"#,
    );
    let out = imag(&["gaussian", arg(&unphysical)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr)
        .to_lowercase()
        .contains("uncertainty"));

    let convention = write(
        &dir,
        "conv.json",
        r#"{"modes": 1, "mean": [0, 0], "cov": [[1, 0], [0, 1]], "convention": "x=(a+ad)/sqrt2"}"#,
    );
    assert_eq!(imag(&["gaussian", arg(&convention)]).status.code(), Some(2));
}

#[test]
fn sweep_stdout_and_file_agree() {
    let dir = TempDir::new().unwrap();
    let grid = "y:0:1:5,mu:0.25:0.75:3";
    let stdout = imag(&["sweep", "--grid", grid]);
    assert!(stdout.status.success());
    let path = dir.path().join("s.csv");
    assert!(imag(&["sweep", "--grid", grid, "--out", arg(&path)])
        .status
        .success());
    let file = std::fs::read(&path).unwrap();
    assert_eq!(stdout.stdout, file);
    let text = String::from_utf8(file).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "y,mu,value");
    assert_eq!(lines.len(), 16);
    for (line, mu) in lines[1..4].iter().zip(["0.25", "0.5", "0.75"]) {
        let rest = line.strip_prefix(&format!("0,{mu},")).unwrap();
        assert!(rest.parse::<f64>().unwrap().abs() <= 1e-12);
    }
}

#[test]
fn default_sweep_grid() {
    let out = imag(&["sweep"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 101 * 99);
    assert!(text.lines().nth(1).unwrap().starts_with("0,0.01,"));
    assert!(text
        .lines()
        .last()
        .unwrap()
        .starts_with("1,0.98999999999999999,"));
}

#[test]
fn gaussian_sweep_columns() {
    let out = imag(&["sweep", "--gaussian-grid", "nu:1:3:3,x2:0:2:3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "nu,zeta,theta,x2,mu,value");
    assert_eq!(lines.len(), 10);
    assert!(lines[1].starts_with("1,0,0,0,0.5,"));
}

#[test]
fn malformed_grids_exit_2() {
    for bad in [
        "y:0:1",
        "y:0:1:0,mu:0.1:0.9:3",
        "y:0:1:3",
        "w:0:1:3,mu:0.1:0.9:3",
        "y:0:x:3,mu:0.5:0.5:1",
    ] {
        assert_eq!(
            imag(&["sweep", "--grid", bad]).status.code(),
            Some(2),
            "{bad}"
        );
    }
    assert_eq!(
        imag(&["sweep", "--gaussian-grid", "y:0:1:3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        imag(&[
            "sweep",
            "--grid",
            "y:0:1:3,mu:0.1:0.9:3",
            "--gaussian-grid",
            "nu:1:2:2"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn verify_axioms_default_seed() {
    let out = imag(&["verify", "--suite", "axioms", "--trials", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json_lines(&out);
    assert_eq!(reports.len(), 1);
    let r = &reports[0];
    assert_eq!(r["suite"], "axioms");
    assert_eq!(r["trials"], 200);
    assert!(r["failures"].as_array().unwrap().is_empty());
    assert!(num(&r["max_violation"]) <= num(&r["tolerance"]));
}

#[test]
fn verify_is_deterministic_and_honours_env_seed() {
    let args = [
        "verify", "--suite", "gaussian", "--trials", "30", "--seed", "42",
    ];
    let a = imag(&args);
    let b = imag(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let from_env = Command::new(env!("CARGO_BIN_EXE_imag"))
        .args(["verify", "--suite", "gaussian", "--trials", "30"])
        .env("IMAG_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(from_env.stdout, a.stdout);
    assert_eq!(json_lines(&a)[0]["seed"], 42);
}

#[test]
fn verify_oracle_reports_deviation() {
    let out = imag(&["verify", "--suite", "oracle"]);
    assert!(out.status.success());
    let r = &json_lines(&out)[0];
    assert_eq!(r["trials"], 81);
    let fock = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "fock_vs_gaussian")
        .unwrap();
    assert!(num(&fock["max_magnitude"]) <= 1e-4);
}

#[test]
fn verify_rejects_zero_trials() {
    assert_eq!(imag(&["verify", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(imag(&["verify", "--suite", "nope"]).status.code(), Some(2));
}
