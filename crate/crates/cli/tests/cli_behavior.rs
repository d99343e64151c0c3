//! End-to-end checks of the binary: artifact shapes, manifests, exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dirtymac::code::{golay_23_12, hamming_7_4, parse_code_file};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn dirtymac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirtymac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_manifest(out: &Path) -> serde_json::Value {
    let path = format!("{}.manifest.json", out.display());
    let text = std::fs::read_to_string(path).expect("manifest written");
    serde_json::from_str(&text).expect("manifest parses")
}

#[test]
fn fixtures_match_builtin_codes() {
    for (name, builtin) in [
        ("hamming_7_4.code", hamming_7_4()),
        ("golay_23_12.code", golay_23_12()),
    ] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let parsed = parse_code_file(&text).unwrap();
        assert_eq!(parsed.n(), builtin.n());
        assert_eq!(parsed.k(), builtin.k());
        assert_eq!(parsed.parity_check(), builtin.parity_check());
    }
}

#[test]
fn region_csv_shape_and_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("region.csv");
    let run = dirtymac(&["region", "--grid", "32", "--out", out.to_str().unwrap()]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));

    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "q,capacity,fmax,envelope,gap,alpha_opt"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 32);
    for row in &rows {
        assert_eq!(row.len(), 6);
        let (q, capacity, fmax, envelope, gap) = (row[0], row[1], row[2], row[3], row[4]);
        // Columns are independently rounded to six decimals, so identities
        // hold only up to the print precision.
        assert!((0.0..=0.5).contains(&q));
        assert!(fmax <= envelope + 2e-6);
        assert!(envelope <= capacity + 2e-6);
        assert!((gap - (capacity - envelope)).abs() < 2e-6);
    }
    // Endpoints of the default range are exact.
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[0][2], 0.0);
    assert_eq!(rows[31][0], 0.5);

    let manifest = read_manifest(&out);
    assert_eq!(manifest["command"], "region");
    assert_eq!(manifest["parameters"]["grid"], 32);
    assert_eq!(manifest["outputs"][0], out.to_str().unwrap());
    assert!(manifest.get("seed").is_none());
    assert!(manifest.get("code_sha256").is_none());
}

#[test]
fn simulate_report_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim.json");
    let code = fixture("hamming_7_4.code");
    let run = dirtymac(&[
        "simulate",
        "--code",
        code.to_str().unwrap(),
        "--q1",
        "0.2",
        "--q2",
        "0.2",
        "--trials",
        "200",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["trials"], 200);
    assert_eq!(report["decode_errors"], 0);
    assert_eq!(report["n"], 7);
    assert_eq!(report["l1"], 3);
    assert_eq!(report["l2"], 0);
    assert_eq!(report["seed"], 7);
    assert_eq!(report["rng"], "chacha8");
    let sha = report["code_sha256"].as_str().unwrap();
    assert_eq!(sha.len(), 64);

    let manifest = read_manifest(&out);
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["code_sha256"], sha);
}

#[test]
fn simulate_split_carries_both_users() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim.json");
    let code = fixture("hamming_7_4.code");
    let run = dirtymac(&[
        "simulate",
        "--code",
        code.to_str().unwrap(),
        "--q1",
        "0.3",
        "--q2",
        "0.3",
        "--l1",
        "2",
        "--l2",
        "1",
        "--trials",
        "200",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["l1"], 2);
    assert_eq!(report["l2"], 1);
    assert!(report["rate2"].as_f64().unwrap() > 0.0);
}

#[test]
fn kmdemo_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("km.csv");
    let code = fixture("hamming_7_4.code");
    let run = dirtymac(&[
        "kmdemo",
        "--theta",
        "0.05",
        "--code",
        code.to_str().unwrap(),
        "--trials",
        "2000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));

    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta,km_bound,sw_bound,gap,empirical_error_rate,code_rate"
    );
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(lines.next().is_none());
    assert_eq!(row[0], 0.05);
    assert!((row[3] - (row[2] - row[1])).abs() < 1e-6);
    assert!((row[5] - 3.0 / 7.0).abs() < 1e-6);
}

#[test]
fn gaussian_overrides_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gauss.json");
    let run = dirtymac(&[
        "gaussian",
        "--samples",
        "20000",
        "--seed",
        "9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["config"]["samples"], 20000);
    assert_eq!(report["config"]["seed"], 9);
    let capacity = report["capacity_bits"].as_f64().unwrap();
    let estimate = report["estimate_bits"].as_f64().unwrap();
    let gap = report["gap_bits"].as_f64().unwrap();
    assert!((gap - (capacity - estimate)).abs() < 1e-12);
    assert!(report["std_error_bits"].as_f64().unwrap() > 0.0);
    assert!(report["calibration_residual_bits"].as_f64().unwrap().abs() < 0.1);

    let manifest = read_manifest(&out);
    assert_eq!(manifest["seed"], 9);
    assert_eq!(manifest["parameters"]["samples"], 20000);
}

#[test]
fn gaussian_config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(
        &cfg_path,
        r#"{"power1": 2.0, "power2": 1.0, "noise": 0.002, "interference1": 1e6,
           "interference2": 1e6, "samples": 20000, "seed": 3}"#,
    )
    .unwrap();
    let out = dir.path().join("gauss.json");
    let run = dirtymac(&[
        "gaussian",
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["config"]["power1"], 2.0);
    assert_eq!(report["config"]["seed"], 3);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let out = out.to_str().unwrap();
    let code = fixture("hamming_7_4.code");
    let code = code.to_str().unwrap();

    let cases: Vec<Vec<&str>> = vec![
        vec!["region", "--q-min", "0.4", "--q-max", "0.2", "--out", out],
        vec!["region", "--q-max", "0.7", "--out", out],
        vec!["region", "--grid", "1", "--out", out],
        vec!["simulate", "--code", "/no/such/file", "--q1", "0.2", "--q2", "0.2", "--out", out],
        // Split must use the whole syndrome, and both halves must be present.
        vec!["simulate", "--code", code, "--q1", "0.3", "--q2", "0.3", "--l1", "2", "--l2", "2", "--out", out],
        vec!["simulate", "--code", code, "--q1", "0.3", "--q2", "0.3", "--l1", "2", "--out", out],
        vec!["gaussian", "--config", "/no/such/file", "--out", out],
        vec!["not-a-command"],
    ];
    for args in cases {
        let run = dirtymac(&args);
        assert_eq!(run.status.code(), Some(1), "args {args:?}");
    }
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let out = out.to_str().unwrap();
    let code = fixture("hamming_7_4.code");
    let code = code.to_str().unwrap();

    // Weight budget below the normalized covering radius 1/7.
    let run = dirtymac(&["simulate", "--code", code, "--q1", "0.1", "--q2", "0.2", "--out", out]);
    assert_eq!(run.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert!(stderr.contains("error:"), "stderr: {stderr}");

    // Malformed code file.
    let bad = dir.path().join("bad.code");
    std::fs::write(&bad, "7 4\n0001111\n").unwrap();
    let run = dirtymac(&["simulate", "--code", bad.to_str().unwrap(), "--q1", "0.2", "--q2", "0.2", "--out", out]);
    assert_eq!(run.status.code(), Some(2));

    // Invalid gaussian config contents.
    let bad_cfg = dir.path().join("bad.json");
    std::fs::write(&bad_cfg, "{\"bogus\": 1}").unwrap();
    let run = dirtymac(&["gaussian", "--config", bad_cfg.to_str().unwrap(), "--out", out]);
    assert_eq!(run.status.code(), Some(2));

    // Coset table budget too small for the code.
    let run = Command::new(env!("CARGO_BIN_EXE_dirtymac"))
        .args(["simulate", "--code", code, "--q1", "0.2", "--q2", "0.2", "--out", out])
        .env("DIRTYMAC_TABLE_CAP_BITS", "4")
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(2));
}
