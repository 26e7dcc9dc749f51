use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

fn run_env(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_feec4d"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("FEEC4D_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout).expect("json report");
    (out.status.code().unwrap(), v)
}

#[test]
fn dims_table_has_fifteen_passing_rows() {
    let (code, v) = json(&["dims", "--k", "1..3"]);
    assert_eq!(code, 0);
    assert_eq!(v["cases"].as_array().unwrap().len(), 15);
    assert_eq!(v["pass"], true);
    assert_eq!(v["command"], "dims");
}

#[test]
fn dims_k2_one_forms() {
    let (code, v) = json(&["dims", "--k", "2", "--s", "1"]);
    assert_eq!(code, 0);
    let c = &v["cases"][0];
    assert_eq!((c["k"].as_u64(), c["s"].as_u64()), (Some(2), Some(1)));
    assert_eq!(c["space_dim"], 216);
    assert_eq!(c["trace_dim"], 208);
    assert_eq!(c["vol_dim"], 8);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["dims", "--k", "0"][..],
        &["unisolvence", "--s", "5"],
        &["traceids", "--which", "9Z"],
        &["frobnicate"],
        &["dims", "--format", "xml"],
        &["dims", "--k", "3..1"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unisolvence_at_order_four() {
    let (code, v) = json(&["unisolvence", "--k", "4", "--s", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["cases"][0]["size"], 625);
}

#[test]
fn exactness_is_deterministic_and_tolerance_sensitive() {
    let a = run(&["exactness", "--seed", "42", "--format", "json"]);
    let b = run(&["exactness", "--seed", "42", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let (code, v) = json(&["exactness", "--tol", "1e-30"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
}

#[test]
fn commute_skips_four_forms_with_a_note() {
    let (code, v) = json(&["commute", "--k", "1"]);
    assert_eq!(code, 0);
    let cases = v["cases"].as_array().unwrap();
    let top = cases.iter().find(|c| c["s"] == 4).unwrap();
    assert!(top["note"].as_str().unwrap().contains("skipped"));
    assert_eq!(top["pass"], true);
    for c in cases.iter().filter(|c| c["s"] != 4) {
        assert!(c["max_residual"].as_f64().unwrap() < 1e-10);
        assert_eq!(c["trials"], 10);
    }
}

#[test]
fn traceids_default_and_single() {
    let (code, v) = json(&["traceids"]);
    assert_eq!(code, 0);
    assert_eq!(v["cases"].as_array().unwrap().len(), 6);
    let (code, v) = json(&["traceids", "--which", "2d"]);
    assert_eq!(code, 0);
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 1);
    assert_eq!(cases[0]["which"], "2D");
}

#[test]
fn pullback_flags_orientation_reversal_reproducibly() {
    let args = ["pullback", "--k", "1..2", "--s", "1,3", "--det-negative", "--seed", "3", "--format", "json"];
    let a = run(&args);
    let b = run_env(&args, Some("0"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    for c in v["cases"].as_array().unwrap() {
        assert!(c["flagged_negative_det"].as_u64().unwrap() > 0);
    }
    let (_, plain) = json(&["pullback", "--k", "1", "--s", "2"]);
    assert_eq!(plain["cases"][0]["flagged_negative_det"], 0);
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["commute", "--k", "1..2", "--format", "json"];
    let serial = run_env(&args, Some("0"));
    let wide = run_env(&args, Some("4"));
    assert_eq!(serial.stdout, wide.stdout);
}

#[test]
fn csv_and_text_outputs() {
    let out = run(&["dims", "--k", "1..2", "--s", "0,4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("k,s,") && header.ends_with(",pass"));
    assert_eq!(lines.count(), 4);

    let out = run(&["dims", "--k", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("dims (seed 1"));
    assert!(text.ends_with("PASS\n"));
}

#[test]
fn out_path_receives_the_report() {
    let path = std::env::temp_dir().join(format!("feec4d-report-{}.json", std::process::id()));
    let out = run(&["dims", "--k", "1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["cases"].as_array().unwrap().len(), 5);
    std::fs::remove_file(path).unwrap();
}
