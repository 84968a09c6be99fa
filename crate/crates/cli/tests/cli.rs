use std::process::{Command, Output};

use serde_json::Value;

fn tracecode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracecode"))
        .args(args)
        .output()
        .expect("spawn tracecode")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn gv_record_json() {
    let out = tracecode(&[
        "gv", "--q", "2", "--length", "160", "--k", "96", "--d", "12", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "gv");
    assert_eq!(v["ok"], true);
}

#[test]
fn build_with_propagation() {
    let out = tracecode(&[
        "build",
        "--q",
        "2",
        "--n",
        "4",
        "--t",
        "2",
        "--tau",
        "8",
        "--nprime",
        "1",
        "--propagate",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    for label in ["[[160,96,≥12]]_2", "[[160,95,≥12]]_2", "[[161,96,≥12]]_2"] {
        assert!(text.contains(label), "missing {label}");
    }
}

#[test]
fn build_accepts_b_instead_of_t() {
    let out = tracecode(&[
        "build", "--q", "3", "--n", "2", "--b", "4", "--tau", "3", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[[36,28,≥5]]_9"));
}

#[test]
fn table1_light_rows_pass() {
    let out = tracecode(&["verify-table1", "--q", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["ok"] == true));
}

#[test]
fn bad_input_exits_with_two() {
    let out = tracecode(&["build", "--q", "6", "--n", "2", "--t", "1", "--tau", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}
