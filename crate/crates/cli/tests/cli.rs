use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sympent"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn sample(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("samples")
        .join(name)
        .display()
        .to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["--bogus"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
}

#[test]
fn validate_exit_codes() {
    let ok = run(&["validate", &sample("vacuum2.json")]);
    assert_eq!(ok.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(report["valid"], true);

    let bad = run(&["validate", &sample("squeezed_too_far.csv")]);
    assert_eq!(bad.status.code(), Some(2));
    let report: Value = serde_json::from_str(&stdout(&bad)).unwrap();
    assert_eq!(report["valid"], false);

    let dir = tempfile::tempdir().unwrap();
    let odd = write(
        dir.path(),
        "odd.json",
        r#"{"n": 1, "ordering": "qqpp", "hbar": 1, "matrix": [1, 0, 0]}"#,
    );
    assert_eq!(run(&["validate", s(&odd)]).status.code(), Some(1));
    let asym = write(
        dir.path(),
        "asym.csv",
        "# sympent covariance n=1 ordering=qqpp\n1,0.2\n0,1\n",
    );
    assert_eq!(run(&["validate", s(&asym)]).status.code(), Some(1));
    let wrong_order = write(
        dir.path(),
        "qpqp.json",
        r#"{"n": 1, "ordering": "qpqp", "hbar": 1, "matrix": [1, 0, 0, 1]}"#,
    );
    assert_eq!(run(&["validate", s(&wrong_order)]).status.code(), Some(1));
    assert_eq!(
        run(&["validate", "/nonexistent/file.json"]).status.code(),
        Some(1)
    );
}

#[test]
fn spectrum_of_model_and_subset() {
    let out = run(&["spectrum", &sample("two_oscillator.json")]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pure"], true);
    assert_eq!(v["spectrum"].as_array().unwrap().len(), 2);

    let out = run(&[
        "spectrum",
        &sample("two_oscillator.json"),
        "--modes",
        "2",
        "--williamson",
    ]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let alpha = 5f64.sqrt();
    let expected = (1.0 + alpha) / (4.0 * alpha.sqrt());
    assert!((v["spectrum"][0].as_f64().unwrap() - expected).abs() < 1e-12);
    assert_eq!(v["modes"][0], 2);
    assert!(v["williamson"]["congruence_residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["williamson"]["transform"].as_array().unwrap().len(), 4);
}

#[test]
fn entropy_reports_both_sides_for_pure_states() {
    let part = "1,2,3|4,5,6";
    let out = run(&[
        "entropy",
        &sample("chain6_periodic.json"),
        "--partition",
        part,
    ]);
    assert!(out.status.success());
    let a: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(a["global_pure"], true);
    assert!(a["complement"]["residual_bits"].as_f64().unwrap() < 1e-8);

    let swapped = run(&[
        "entropy",
        &sample("chain6_periodic.json"),
        "--partition",
        "4,5,6|1,2,3",
    ]);
    let b: Value = serde_json::from_str(&stdout(&swapped)).unwrap();
    let (sa, sb) = (
        a["total_bits"].as_f64().unwrap(),
        b["total_bits"].as_f64().unwrap(),
    );
    assert!((sa - sb).abs() < 1e-8);

    let nats = run(&[
        "entropy",
        &sample("chain6_periodic.json"),
        "--partition",
        part,
        "--base",
        "nats",
    ]);
    let n: Value = serde_json::from_str(&stdout(&nats)).unwrap();
    assert_eq!(n["base"], "nats");
    assert!((n["total"].as_f64().unwrap() - sa * std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn entropy_of_mixed_state_omits_complement() {
    let dir = tempfile::tempdir().unwrap();
    let thermal = write(
        dir.path(),
        "thermal.json",
        r#"{"n": 2, "ordering": "qqpp", "hbar": 1, "matrix": [1.5,0,0,0, 0,0.5,0,0, 0,0,1.5,0, 0,0,0,0.5]}"#,
    );
    let out = run(&["entropy", s(&thermal), "--partition", "1|2"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["global_pure"], false);
    assert!(v.get("complement").is_none());
    assert!((v["total_bits"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn bad_partitions_are_rejected() {
    for p in ["1|1", "1,2|", "0|1", "1|3", "a|b"] {
        let out = run(&["entropy", &sample("two_oscillator.json"), "--partition", p]);
        assert_eq!(out.status.code(), Some(1), "partition {p}");
    }
}

#[test]
fn sweep_output_is_deterministic_and_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let r = run(&["sweep", &sample("lambda_sweep.json"), "--out", s(out)]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    let text = fs::read(&a).unwrap();
    assert_eq!(text, fs::read(&b).unwrap());
    let stdout_run = run(&["sweep", &sample("lambda_sweep.json")]);
    assert_eq!(stdout_run.stdout, text);

    let record: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.run.json")).unwrap())
            .unwrap();
    assert_eq!(record["command"], "sweep");
    assert_eq!(record["options"]["partition"], "1|2");
    assert_eq!(record["options"]["base"], "bits");
    assert_eq!(record["input_digest"].as_str().unwrap().len(), 64);
    let csv = String::from_utf8(text).unwrap();
    assert!(csv
        .lines()
        .any(|l| l.starts_with("# conventions: ordering=qqpp")));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 22);
}

#[test]
fn sweep_flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"model": {"type": "chain", "n": 4, "m": 1, "omega": 1, "lambda": 1, "boundary": "open"},
            "parameter": "omega", "start": 0.5, "stop": 1.5, "count": 3, "partition": "1|2,3,4", "base": "nats"}"#,
    );
    let out = stdout(&run(&["sweep", s(&spec)]));
    assert!(out.contains("log_base=nats") && out.contains("omega,sigma_1,total_nats,s_count"));
    let out = stdout(&run(&[
        "sweep",
        s(&spec),
        "--base",
        "bits",
        "--partition",
        "1,2|3,4",
    ]));
    assert!(
        out.contains("log_base=bits") && out.contains("omega,sigma_1,sigma_2,total_bits,s_count")
    );
}

#[test]
fn failed_sweep_names_point_and_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"model": {"type": "two_oscillator", "m": 1, "omega": 1, "lambda": 0},
            "parameter": "lambda", "start": 0, "stop": -1, "count": 5, "partition": "1|2"}"#,
    );
    let out_path = dir.path().join("out.csv");
    let r = run(&["sweep", s(&spec), "--out", s(&out_path)]);
    assert_eq!(r.status.code(), Some(1));
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains("lambda=-0.25"), "{err}");
    assert!(!out_path.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn unknown_sweep_fields_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"model": {"type": "two_oscillator", "m": 1, "omega": 1, "lambda": 0},
            "parameter": "lambda", "start": 0, "stop": 1, "count": 2, "partition": "1|2", "colour": 1}"#,
    );
    assert_eq!(run(&["sweep", s(&spec)]).status.code(), Some(1));
}

#[test]
fn verify_grids_pass() {
    let coarse = run(&["verify"]);
    assert_eq!(coarse.status.code(), Some(0));
    let text = stdout(&coarse);
    assert_eq!(text.lines().filter(|l| l.ends_with(",ok")).count(), 11);
    let fine = run(&["verify", "--grid", "fine", "--seed", "3"]);
    assert_eq!(fine.status.code(), Some(0), "{}", stdout(&fine));
}

#[test]
fn verify_fails_with_exit_three_under_impossible_tolerance() {
    let out = run(&["verify", "--tol", "1e-20"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma="));
}

#[test]
fn wigner_writes_grid_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let r = run(&[
        "wigner",
        &sample("vacuum2.json"),
        "--mode",
        "2",
        "--grid",
        "6,61",
        "--out",
        s(&out),
    ]);
    assert!(r.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(
        text.lines().filter(|l| !l.starts_with('#')).count(),
        1 + 61 * 61
    );
    assert!(text.contains("\nq,p,W\n"));
    let centre = text
        .lines()
        .find(|l| l.starts_with("0.0000000000000000e0,0.0000000000000000e0,"))
        .unwrap();
    let w: f64 = centre.rsplit(',').next().unwrap().parse().unwrap();
    assert!((w - 1.0 / std::f64::consts::PI).abs() < 1e-14);
    assert_eq!(
        run(&["wigner", &sample("vacuum2.json"), "--mode", "3"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn record_flag_for_stdout_commands() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("rec.json");
    let out = run(&[
        "spectrum",
        &sample("vacuum2.json"),
        "--record",
        s(&rec),
        "--tol",
        "1e-9",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&rec).unwrap()).unwrap();
    assert_eq!(v["options"]["tol"], "1e-9");
    assert!(v["output_path"].is_null());
    let digest = v["output_digest"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
}
