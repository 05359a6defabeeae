use std::process::{Command, Output};

use serde_json::Value;

fn structfac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_structfac"))
        .args(args)
        .env_remove("STRUCTFAC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn eval_dicke_closed_form() {
    let v = stdout_json(&structfac(&[
        "eval",
        "--state",
        "dicke:4,2",
        "--k",
        "0",
        "--c",
        "1,1,-1",
        "--format",
        "json",
    ]));
    assert!((v["sigma"].as_f64().unwrap() - 5.0 / 3.0).abs() < 1e-12);
    assert!((v["witness"].as_f64().unwrap() + 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["detected"], Value::Bool(true));
}

#[test]
fn robustness_csv_thresholds() {
    let out = structfac(&[
        "robustness",
        "--state",
        "phased-dicke:6,3",
        "--k",
        "pi",
        "--c",
        "1,1,1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap(),
        vec!["state_id", "spec", "p_star", "q_star"]
    );
    let row = rdr.records().next().unwrap().unwrap();
    let p: f64 = row[2].parse().unwrap();
    let q: f64 = row[3].parse().unwrap();
    assert!((p - 6.0 / 31.0).abs() < 1e-12);
    assert!((q - (1.0 - 5.0 / 31f64.sqrt())).abs() < 1e-12);
}

#[test]
fn scan_endpoints_and_row_count() {
    let out = structfac(&[
        "scan",
        "--state",
        "dicke:4,2",
        "--c",
        "1,1,-1",
        "--points",
        "5",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,sigma,witness");
    assert_eq!(lines.len(), 6);
    let last_k: f64 = lines[5].split(',').next().unwrap().parse().unwrap();
    assert_eq!(last_k, std::f64::consts::PI);
}

#[test]
fn sample_is_reproducible_by_seed() {
    let args = [
        "sample",
        "--state",
        "dicke:4,2",
        "--k",
        "0",
        "--c",
        "1,1,-1",
        "--shots",
        "100,1000",
        "--format",
        "csv",
    ];
    let a = structfac(&[&args[..], &["--seed", "7"]].concat());
    let b = structfac(&[&args[..], &["--seed", "7"]].concat());
    let c = structfac(&[&args[..], &["--seed", "8"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let from_env = Command::new(env!("CARGO_BIN_EXE_structfac"))
        .args(args)
        .env("STRUCTFAC_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(from_env.stdout, a.stdout);
}

#[test]
fn bisep_bound_with_gme_check() {
    let v = stdout_json(&structfac(&[
        "bisep-bound",
        "--state",
        "phased-dicke:4,2",
        "--k",
        "pi",
        "--c",
        "1,1,1",
        "--restarts",
        "20",
        "--format",
        "json",
    ]));
    let bound = v["bound"].as_f64().unwrap();
    assert!((bound - 1.187).abs() < 0.01, "{bound}");
    assert_eq!(v["spec"]["n_qubits"], 4);
    assert_eq!(v["best_state"].as_array().unwrap().len(), 2);
    let eval = stdout_json(&structfac(&[
        "eval",
        "--state",
        "phased-dicke:4,2",
        "--k",
        "pi",
        "--c",
        "1,1,1",
        "--format",
        "json",
    ]));
    let sigma = v["gme_check"]["sigma"].as_f64().unwrap();
    assert_eq!(sigma, eval["sigma"].as_f64().unwrap());
    assert_eq!(v["gme_check"]["gme_detected"], Value::Bool(sigma > bound));
}

#[test]
fn fixed_cut_bound() {
    let v = stdout_json(&structfac(&[
        "bisep-bound",
        "--n",
        "4",
        "--k",
        "pi",
        "--c",
        "1,1,1",
        "--cut",
        "1,2,3|4",
        "--restarts",
        "10",
        "--format",
        "json",
    ]));
    assert_eq!(v["best_cut"]["part_a"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["best_cut"]["part_b"], serde_json::json!([4]));
}

#[test]
fn state_and_spec_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &state,
        r#"{"n_qubits":2,"terms":[{"basis":"01","re":0.7071067811865476,"im":0},{"basis":"10","re":0.7071067811865476,"im":0}]}"#,
    )
    .unwrap();
    std::fs::write(&spec, r#"{"n_qubits":2,"k":0,"c":[1,1,-1]}"#).unwrap();
    let out_path = dir.path().join("out.json");
    let out = structfac(&[
        "eval",
        "--state",
        state.to_str().unwrap(),
        "--spec",
        spec.to_str().unwrap(),
        "--format",
        "json",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    // the two-qubit triplet: (N+1)/(N-1) = 3
    assert!((v["sigma"].as_f64().unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| structfac(args).status.code().unwrap();
    assert_eq!(
        code(&[
            "eval",
            "--state",
            "no-such-file.json",
            "--k",
            "0",
            "--c",
            "1,1,1"
        ]),
        2
    );
    assert_eq!(code(&["eval", "--state", "dicke:4,2", "--c", "1,1,1"]), 2);
    assert_eq!(
        code(&["eval", "--state", "dicke:4,2", "--k", "0", "--c", "1.5,0,0"]),
        2
    );
    assert_eq!(
        code(&["eval", "--state", "dicke:4,5", "--k", "0", "--c", "1,1,1"]),
        2
    );
    assert_eq!(
        code(&["eval", "--state", "dicke:40,2", "--k", "0", "--c", "1,1,1"]),
        3
    );
    assert_eq!(
        code(&["bisep-bound", "--n", "1", "--k", "0", "--c", "1,1,1"]),
        2
    );
    assert_eq!(
        code(&[
            "bisep-bound",
            "--n",
            "4",
            "--k",
            "0",
            "--c",
            "1,1,1",
            "--cut",
            "1,2|3"
        ]),
        2
    );
    let missing_dir = std::env::temp_dir()
        .join("structfac-no-such-dir")
        .join("out.csv");
    assert_eq!(
        code(&[
            "eval",
            "--state",
            "dicke:2,1",
            "--k",
            "0",
            "--c",
            "1,1,1",
            "-o",
            missing_dir.to_str().unwrap()
        ]),
        3
    );
}

#[test]
fn reproduce_paper_reports_every_criterion() {
    let out = structfac(&[
        "reproduce-paper",
        "--restarts",
        "10",
        "--shots",
        "10000",
        "--c-step",
        "0.5",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    for criterion in 1..=12 {
        assert!(
            checks.iter().any(|c| c["criterion"] == criterion),
            "criterion {criterion} missing"
        );
    }
    let failed = v["failed"].as_u64().unwrap();
    assert_eq!(
        out.status.code().unwrap(),
        if failed == 0 { 0 } else { 5 },
        "exit status must reflect the report"
    );
}
