//! End-to-end tests of the divax binary: input handling, report shapes,
//! exit codes, and format equivalence.

use std::path::PathBuf;
use std::process::Command;

fn write_file(dir: &tempfile::TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn divax(args: &[&str]) -> Run {
    divax_with_env(args, &[])
}

fn divax_with_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_divax"));
    cmd.args(args).env_remove("DIVAX_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let output = cmd.output().expect("binary runs");
    Run {
        stdout: String::from_utf8(output.stdout).unwrap(),
        stderr: String::from_utf8(output.stderr).unwrap(),
        code: output.status.code().unwrap_or(-1),
    }
}

fn json(run: &Run) -> serde_json::Value {
    serde_json::from_str(&run.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", run.stdout);
    })
}

#[test]
fn divergence_single_pair_kl_value() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(
        &dir,
        "one.csv",
        "id,side,v1,v2\na,p,0.5,0.5\na,q,0.25,0.75\n",
    );
    let run = divax(&[
        "--command",
        "divergence",
        "--input",
        input.to_str().unwrap(),
        "--alpha",
        "1",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc = json(&run);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["record_id"], "a");
    let value = rows[0]["value"].as_f64().unwrap();
    assert!((value - 0.14384103622589042).abs() < 1e-10);
    assert_eq!(rows[0]["finite"], true);
}

#[test]
fn divergence_equal_pair_is_zero_for_every_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(
        &dir,
        "same.csv",
        "id,side,v1,v2,v3\nx,p,0.2,0.3,0.5\nx,q,0.2,0.3,0.5\n",
    );
    let run = divax(&[
        "--command",
        "divergence",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(run.code, 0);
    let doc = json(&run);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    for row in rows {
        assert_eq!(row["value"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn divergence_bad_sum_names_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(
        &dir,
        "bad.csv",
        "id,side,v1,v2,v3\nok,p,0.5,0.5\nok,q,0.25,0.75\nbad,p,0.3,0.3,0.3\nbad,q,0.4,0.3,0.3\n",
    );
    let run = divax(&[
        "--command",
        "divergence",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("line 4"), "stderr: {}", run.stderr);
    assert!(run.stderr.contains("validation"), "stderr: {}", run.stderr);
}

#[test]
fn divergence_json_input_and_closed_routing() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(
        &dir,
        "pairs.json",
        r#"[{"id":"z","p":[0.5,0.5],"q":[1.0,0.0]}]"#,
    );
    let run = divax(&[
        "--command",
        "divergence",
        "--input",
        input.to_str().unwrap(),
        "--alpha",
        "1,2",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc = json(&run);
    let rows = doc["rows"].as_array().unwrap();
    // alpha = 1 diverges on missing support; alpha = 2 hits the zero
    // conventions and stays finite.
    assert_eq!(rows[0]["alpha"].as_f64().unwrap(), 1.0);
    assert!(rows[0]["value"].is_null());
    assert_eq!(rows[0]["finite"], false);
    assert_eq!(rows[1]["alpha"].as_f64().unwrap(), 2.0);
    assert!((rows[1]["value"].as_f64().unwrap() - (-0.75)).abs() < 1e-12);
    assert_eq!(rows[1]["finite"], true);
}

#[test]
fn divergence_forced_open_rejects_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(&dir, "zero.csv", "id,side,v1,v2\na,p,1,0\na,q,1,0\n");
    let run = divax(&[
        "--command",
        "divergence",
        "--input",
        input.to_str().unwrap(),
        "--domain",
        "open",
    ]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("line 2"), "stderr: {}", run.stderr);
    // Auto routing accepts the same file on the closed domain.
    let run = divax(&[
        "--command",
        "divergence",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
}

#[test]
fn axioms_default_run_passes_everything() {
    let run = divax(&[
        "--command",
        "axioms",
        "--trials",
        "5",
        "--alpha",
        "0.5,1,2",
        "--seed",
        "3",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc = json(&run);
    let rows = doc["reports"].as_array().unwrap();
    assert!(!rows.is_empty());
    for row in rows {
        assert_eq!(row["verdict"], "pass", "{row}");
        assert_eq!(row["expected"], "pass");
    }
    assert_eq!(doc["summary"]["fail"], 0);
    assert_eq!(
        doc["summary"]["pass"].as_u64().unwrap() as usize,
        rows.len()
    );
    // Canonical ordering: divergence rows come first, axiom-major.
    assert_eq!(rows[0]["measure"], "divergence");
    assert_eq!(rows[0]["axiom"], "alpha_recursivity");
}

#[test]
fn axioms_broken_run_fails_with_exit_one() {
    let run = divax(&[
        "--command",
        "axioms",
        "--measures",
        "broken",
        "--trials",
        "5",
        "--alpha",
        "2",
        "--seed",
        "3",
    ]);
    assert_eq!(run.code, 1);
    let doc = json(&run);
    assert!(doc["summary"]["fail"].as_u64().unwrap() >= 5);
    let rows = doc["reports"].as_array().unwrap();
    let spike: Vec<_> = rows
        .iter()
        .filter(|r| r["measure"] == "certainty-spike")
        .collect();
    assert!(spike
        .iter()
        .any(|r| r["axiom"] == "decisivity" && r["verdict"] == "fail" && r["expected"] == "fail"));
}

#[test]
fn reconstruct_defaults_stay_within_budget() {
    let run = divax(&[
        "--command",
        "reconstruct",
        "--trials",
        "40",
        "--alpha",
        "-1,1,2",
        "--seed",
        "11",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc = json(&run);
    for row in doc["reconstruction"].as_array().unwrap() {
        assert!(row["max_abs_vs_divergence"].as_f64().unwrap() <= 1e-10);
        assert!(row["max_abs_vs_recursion"].as_f64().unwrap() <= 1e-10);
    }
}

#[test]
fn reconstruct_zero_initial_element_is_identically_zero() {
    let run = divax(&[
        "--command",
        "reconstruct",
        "--initial-element",
        "zero",
        "--trials",
        "20",
        "--alpha",
        "0.5,2",
    ]);
    assert_eq!(run.code, 0);
    let doc = json(&run);
    for row in doc["reconstruction"].as_array().unwrap() {
        assert_eq!(row["max_abs_value"].as_f64().unwrap(), 0.0);
        assert_eq!(row["max_abs_vs_recursion"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn reconstruct_scaled_initial_element_reports_the_ratio() {
    let run = divax(&[
        "--command",
        "reconstruct",
        "--initial-element",
        "scaled",
        "--gamma",
        "3",
        "--trials",
        "60",
        "--alpha",
        "2",
        "--seed",
        "5",
    ]);
    assert_eq!(run.code, 0);
    let doc = json(&run);
    let row = &doc["reconstruction"].as_array().unwrap()[0];
    let lo = row["gamma_ratio_min"].as_f64().unwrap();
    let hi = row["gamma_ratio_max"].as_f64().unwrap();
    assert!((lo - 3.0).abs() <= 1e-9, "ratio min {lo}");
    assert!((hi - 3.0).abs() <= 1e-9, "ratio max {hi}");
}

#[test]
fn csv_and_json_carry_identical_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(
        &dir,
        "pairs.csv",
        "id,side,v1,v2,v3\na,p,0.5,0.5\na,q,0.25,0.75\nb,p,0.2,0.3,0.5\nb,q,0.5,0.5,0\n",
    );
    let base = [
        "--command",
        "divergence",
        "--input",
        input.to_str().unwrap(),
        "--seed",
        "21",
    ];
    let json_run = divax(&base);
    let mut csv_args = base.to_vec();
    csv_args.extend(["--format", "csv"]);
    let csv_run = divax(&csv_args);
    assert_eq!(json_run.code, 0);
    assert_eq!(csv_run.code, 0);

    let doc = json(&json_run);
    let json_values: Vec<String> = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| match r["value"].as_f64() {
            Some(v) => format!("{:.16e}", v),
            None => String::new(),
        })
        .collect();
    let csv_values: Vec<String> = csv_run
        .stdout
        .lines()
        .skip(1)
        .map(|line| line.split(',').nth(2).unwrap().to_string())
        .collect();
    assert_eq!(json_values, csv_values);
}

#[test]
fn axioms_csv_format_has_the_same_verdicts() {
    let args_json = [
        "--command",
        "axioms",
        "--trials",
        "4",
        "--alpha",
        "2",
        "--seed",
        "13",
    ];
    let json_run = divax(&args_json);
    let mut args_csv = args_json.to_vec();
    args_csv.extend(["--format", "csv"]);
    let csv_run = divax(&args_csv);
    assert_eq!(json_run.code, 0);
    assert_eq!(csv_run.code, 0);
    let doc = json(&json_run);
    let json_rows = doc["reports"].as_array().unwrap();
    let csv_lines: Vec<&str> = csv_run.stdout.lines().collect();
    assert_eq!(csv_lines.len() - 1, json_rows.len());
    for (line, row) in csv_lines[1..].iter().zip(json_rows) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], row["measure"].as_str().unwrap());
        assert_eq!(fields[1], row["axiom"].as_str().unwrap());
        assert_eq!(fields[6], row["verdict"].as_str().unwrap());
        let alpha_csv: f64 = fields[2].parse().unwrap();
        assert_eq!(alpha_csv, row["alpha"].as_f64().unwrap());
        let resid_csv: f64 = fields[4].parse().unwrap();
        assert_eq!(resid_csv, row["max_residual"].as_f64().unwrap());
    }
}

#[test]
fn seed_env_fallback_and_flag_precedence() {
    let from_env = divax_with_env(
        &["--command", "reconstruct", "--trials", "3", "--alpha", "2"],
        &[("DIVAX_SEED", "123")],
    );
    let doc = json(&from_env);
    assert_eq!(doc["config_echo"]["seed"].as_u64().unwrap(), 123);

    let flag_wins = divax_with_env(
        &[
            "--command",
            "reconstruct",
            "--trials",
            "3",
            "--alpha",
            "2",
            "--seed",
            "77",
        ],
        &[("DIVAX_SEED", "123")],
    );
    let doc = json(&flag_wins);
    assert_eq!(doc["config_echo"]["seed"].as_u64().unwrap(), 77);
}

#[test]
fn config_errors_exit_two() {
    let run = divax(&["--command", "axioms", "--trials", "0"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("trials"));

    let run = divax(&["--command", "axioms", "--n-max", "2"]);
    assert_eq!(run.code, 2);

    let run = divax(&["--command", "divergence"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("--input"));

    // Unknown flags are clap's domain; it also exits 2.
    let run = divax(&["--command", "axioms", "--no-such-flag"]);
    assert_eq!(run.code, 2);
}

#[test]
fn report_matches_the_shipped_schema_field_names() {
    let schema_text = include_str!("../../../schema/report.schema.json");
    let schema: serde_json::Value = serde_json::from_str(schema_text).unwrap();
    let run = divax(&[
        "--command",
        "axioms",
        "--trials",
        "3",
        "--alpha",
        "2",
        "--seed",
        "1",
    ]);
    let doc = json(&run);

    let top_required: Vec<&str> = schema["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    for key in top_required {
        assert!(doc.get(key).is_some(), "missing top-level field {key}");
    }
    let report_required: Vec<&str> = schema["properties"]["reports"]["items"]["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let first = &doc["reports"].as_array().unwrap()[0];
    for key in report_required {
        assert!(first.get(key).is_some(), "missing report field {key}");
    }
}
