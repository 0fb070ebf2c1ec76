use std::process::{Command, Output};

use serde_json::Value;

fn nudirac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nudirac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../schema/result.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

fn assert_valid(doc: &Value) {
    let v = schema();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

/// Every null record field has a reason.
fn assert_nulls_explained(doc: &Value) {
    for r in doc["records"].as_array().unwrap() {
        let reasons = r["null_reasons"].as_object().unwrap();
        for (k, v) in r.as_object().unwrap() {
            if v.is_null() {
                assert!(
                    reasons.contains_key(k),
                    "n={} field {k} is null without reason",
                    r["n"]
                );
            }
        }
    }
}

fn energies(doc: &Value) -> Vec<f64> {
    doc["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["E_engine"]["re"].as_f64().unwrap())
        .collect()
}

#[test]
fn solve_nonpt_reference() {
    let o = nudirac(&[
        "solve",
        "--model",
        "nonpt-shifted",
        "--alpha",
        "1",
        "--gamma",
        "2",
        "--beta",
        "2",
        "--nmax",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = stdout_json(&o);
    assert_valid(&doc);
    assert_nulls_explained(&doc);
    for (r, want) in doc["records"]
        .as_array()
        .unwrap()
        .iter()
        .zip([0.0, 2.0, 4.0])
    {
        assert!((r["E_engine"]["re"].as_f64().unwrap() - want).abs() < 1e-10);
        assert!((r["E_paper_formula"].as_f64().unwrap() - want).abs() < 1e-12);
    }
}

#[test]
fn solve_pt_slice() {
    let o = nudirac(&[
        "solve",
        "--model",
        "pt-linear",
        "--a",
        "1",
        "--b",
        "2",
        "--gamma",
        "2",
        "--omega",
        "2",
        "--nmax",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let e = energies(&stdout_json(&o));
    assert_eq!(e.len(), 2);
    assert!((e[0] - 2.0).abs() < 1e-9 && (e[1] - 2.5).abs() < 1e-9);
}

#[test]
fn off_slice_nonpt_needs_engine_only() {
    let o = nudirac(&[
        "solve",
        "--model",
        "nonpt-shifted",
        "--alpha",
        "1",
        "--gamma",
        "2",
        "--beta",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("closed forms require β = αγ"));
    assert!(err["error"]["kind"].is_string());

    let o = nudirac(&[
        "solve",
        "--model",
        "nonpt-shifted",
        "--alpha",
        "1",
        "--gamma",
        "2",
        "--beta",
        "3",
        "--engine-only",
    ]);
    assert_ne!(
        o.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn verify_defaults_pass() {
    let o = nudirac(&["verify"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    let doc = stdout_json(&o);
    assert_valid(&doc);
    assert_nulls_explained(&doc);
    assert_eq!(doc["status"], "pass");
    assert!(doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn verify_pt_off_slice_records_discrepancy() {
    let o = nudirac(&["verify", "--model", "pt-linear", "--a", "0", "--nmax", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = stdout_json(&o);
    assert_valid(&doc);
    let notes = doc["discrepancy_notes"].as_array().unwrap();
    assert!(notes
        .iter()
        .any(|n| n.as_str().unwrap().contains("E_paper_formula")));
    for r in doc["records"].as_array().unwrap() {
        let diff = r["E_engine"]["re"].as_f64().unwrap() - r["E_paper_formula"].as_f64().unwrap();
        assert!((diff + 4.0).abs() < 1e-9);
    }
}

#[test]
fn tiny_grid_fails_verification() {
    let o = nudirac(&["verify", "--grid", "16"]);
    assert_eq!(o.status.code(), Some(2));
    let doc = stdout_json(&o);
    assert_valid(&doc);
    assert_nulls_explained(&doc);
    assert_eq!(doc["status"], "fail");
    assert!(doc["records"][0]["E_oracle"].is_null());
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["solve", "--nmax", "21"],
        vec!["solve", "--model", "harmonic"],
        vec!["solve", "--scheme", "spline"],
        vec!["verify", "--domain", "1"],
        vec!["solve", "--model", "pt-linear", "--gamma", "0"],
        vec!["frobnicate"],
    ] {
        let o = nudirac(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err: Value = serde_json::from_slice(&o.stderr).unwrap_or_else(|_| panic!("{args:?}"));
        assert!(err["error"]["message"].is_string());
    }
}

#[test]
fn json_output_is_deterministic() {
    let args = ["verify", "--model", "pt-linear", "--nmax", "1"];
    let a = nudirac(&args);
    let b = nudirac(&args);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"model": "nonpt-shifted", "parameters": {"alpha": 1, "beta": 2, "gamma": 2}, "n_max": 1}"#,
    )
    .unwrap();
    let o = nudirac(&["solve", "--config", cfg.to_str().unwrap(), "--nmax", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let e = energies(&stdout_json(&o));
    assert_eq!(e.len(), 4);
    assert!((e[3] - 6.0).abs() < 1e-10);
}

#[test]
fn export_csv_blocks() {
    let o = nudirac(&[
        "export",
        "--model",
        "nonpt-shifted",
        "--alpha",
        "1",
        "--beta",
        "2",
        "--gamma",
        "2",
        "--nmax",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2 * 102);
    for block in lines.chunks(102) {
        assert_eq!(block[0], "x,re_psi1,im_psi1,re_psi2,im_psi2,n");
    }
    // 17 significant digits survive a parse/format round trip.
    for line in &lines[1..102] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 6);
        assert_eq!(cells[5], "0");
        for cell in &cells[..5] {
            let v: f64 = cell.parse().unwrap();
            assert_eq!(format!("{v:.16e}"), *cell);
            let mantissa = cell.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
        }
    }
    let first: Vec<f64> = lines[1].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(first[0], -5.0);
}

#[test]
fn export_json_validates() {
    let o = nudirac(&[
        "export", "--nmax", "1", "--points", "11", "--output", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = stdout_json(&o);
    assert_valid(&doc);
    assert_eq!(doc["wavefunctions"].as_array().unwrap().len(), 2);
    assert_eq!(
        doc["wavefunctions"][0]["samples"].as_array().unwrap().len(),
        11
    );
}

#[test]
fn out_path_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("result.json");
    let o = nudirac(&["solve", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_valid(&doc);
    let leftovers: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 1);
}

#[test]
fn unwritable_out_path_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("result.csv");
    let o = nudirac(&["export", "--out", path.to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(0));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("cannot write"));
}

#[test]
fn sweep_runs_each_value() {
    let o = nudirac(&[
        "sweep",
        "--vary",
        "alpha",
        "--values",
        "1,2,3",
        "--gamma",
        "1",
        "--beta",
        "2",
        "--engine-only",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let doc = stdout_json(&o);
    let runs = doc["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 3);
    for run in runs {
        let d = &run["document"];
        assert_valid(d);
        assert_eq!(d["config"]["parameters"]["alpha"], run["value"]);
    }
}

#[test]
fn sweep_reports_per_run_errors() {
    let o = nudirac(&[
        "sweep", "--vary", "beta", "--values", "4,5", "--alpha", "4", "--gamma", "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let doc = stdout_json(&o);
    assert!(doc["runs"][0]["document"].is_object());
    assert!(doc["runs"][1]["error"]["error"]["message"].is_string());
}

#[test]
fn csv_solve_output() {
    let o = nudirac(&["solve", "--output", "csv", "--nmax", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("n,E_engine_re"));
}

#[test]
fn help_exits_zero() {
    let o = nudirac(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("verify"));
}
