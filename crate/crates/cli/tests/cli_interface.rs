// Copyright 2026 Wavematrix Contributors
// SPDX-License-Identifier: Apache-2.0

//! Binary-level interface checks: exit codes, output files, config
//! precedence, and the seed environment variable.

use std::process::Command;

fn wml() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wml"));
    // Keep the environment hermetic for seed-precedence checks.
    cmd.env_remove("WML_SEED");
    cmd
}

#[test]
fn verify_succeeds_and_prints_pass_lines() {
    let out = wml().args(["verify", "--d", "2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    assert!(!text.contains("FAIL"));
}

#[test]
fn usage_errors_exit_with_code_two() {
    let out = wml().args(["scaling", "--eps", "2.0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = wml().args(["verify", "--d", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Unknown flags are clap usage errors, also 2.
    let out = wml().args(["bounds", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bounds_csv_file_contains_expected_arithmetic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bounds.csv");
    let out = wml()
        .args([
            "bounds",
            "--d-list",
            "2",
            "--t",
            "1.0",
            "--eps",
            "0.1",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let row = reader.records().next().unwrap().unwrap();
    let field = |name: &str| -> f64 {
        let idx = headers.iter().position(|h| h == name).unwrap();
        row[idx].parse().unwrap()
    };
    assert!((field("new_upper") - 8.75).abs() <= 1e-12);
    assert!((field("old_upper") - 120.0).abs() <= 1e-12);
}

#[test]
fn csv_and_json_outputs_agree_field_for_field() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("rows.csv");
    let json_path = dir.path().join("rows.json");
    let base = [
        "worstcase",
        "--d-list",
        "2,8",
        "--n-grid",
        "8,16",
        "--seed",
        "5",
    ];
    let run = |fmt: &str, path: &std::path::Path| {
        let out = wml()
            .args(base)
            .args(["--format", fmt, "--out", path.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    };
    run("csv", &csv_path);
    run("json", &json_path);

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let csv_text = std::fs::read_to_string(&csv_path).unwrap();
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    for (record, obj) in reader.records().zip(json.as_array().unwrap()) {
        let record = record.unwrap();
        for (name, csv_field) in headers.iter().zip(record.iter()) {
            if name == "timestamp" {
                continue;
            }
            let jv = &obj[name];
            if jv.is_null() {
                assert_eq!(csv_field, "");
            } else if let Some(f) = jv.as_f64() {
                if jv.is_f64() {
                    let c: f64 = csv_field.parse().unwrap();
                    assert_eq!(
                        c.to_bits(),
                        f.to_bits(),
                        "field {name}: csv '{csv_field}' vs json '{jv}'"
                    );
                } else {
                    assert_eq!(csv_field.parse::<u64>().unwrap(), jv.as_u64().unwrap());
                }
            } else if let Some(b) = jv.as_bool() {
                assert_eq!(csv_field.parse::<bool>().unwrap(), b);
            } else {
                assert_eq!(csv_field, jv.as_str().unwrap());
            }
        }
    }
}

#[test]
fn config_file_applies_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(
        &cfg_path,
        r#"{"d_list": [2], "eps": 0.2, "seed": 11, "t": 1.0}"#,
    )
    .unwrap();
    let out_path = dir.path().join("rows.csv");
    let out = wml()
        .args([
            "bounds",
            "--config",
            cfg_path.to_str().unwrap(),
            "--eps",
            "0.05",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let row = reader.records().next().unwrap().unwrap();
    let idx = |name: &str| headers.iter().position(|h| h == name).unwrap();
    // Flag beats file; file beats default.
    assert_eq!(row[idx("eps")].parse::<f64>().unwrap(), 0.05);
    assert_eq!(row[idx("seed")].parse::<u64>().unwrap(), 11);
}

#[test]
fn seed_env_var_supplies_default() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("rows.csv");
    let out = wml()
        .env("WML_SEED", "424242")
        .args([
            "bounds",
            "--d-list",
            "2",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("424242"));

    // An explicit flag still wins over the environment.
    let out = wml()
        .env("WML_SEED", "424242")
        .args([
            "bounds",
            "--d-list",
            "2",
            "--seed",
            "7",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(!text.contains("424242"));
}

#[test]
fn repeated_runs_are_identical_without_timestamps() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.csv");
    let b_path = dir.path().join("b.csv");
    for path in [&a_path, &b_path] {
        let out = wml()
            .args([
                "typical",
                "--d-list",
                "16",
                "--trials",
                "50",
                "--seed",
                "77",
                "--out",
                path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let strip = |text: &str| -> Vec<String> {
        // Remove the timestamp column (fixed position by header lookup).
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let headers = reader.headers().unwrap().clone();
        let ts = headers.iter().position(|h| h == "timestamp").unwrap();
        reader
            .records()
            .map(|r| {
                let r = r.unwrap();
                r.iter()
                    .enumerate()
                    .filter(|(i, _)| *i != ts)
                    .map(|(_, f)| f.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect()
    };
    let a = std::fs::read_to_string(&a_path).unwrap();
    let b = std::fs::read_to_string(&b_path).unwrap();
    assert_eq!(strip(&a), strip(&b));
}
