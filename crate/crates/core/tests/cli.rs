use std::process::{Command, Output};

use wrom::harness::{parse_results, Format};

fn wrom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wrom")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    wrom(args).status.code().unwrap()
}

#[test]
fn attack_writes_a_result_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = wrom(&[
        "attack", "--scheme", "rsa-fdh", "--model", "common-cp-ct", "--l", "8", "--t", "4", "--k", "8", "--trials", "500",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rs = parse_results(&out, Format::Json).unwrap();
    assert_eq!(rs.len(), 1);
    assert_eq!(rs[0].trials, 500);
    assert_eq!(rs[0].attack, "collision");
    assert!(String::from_utf8_lossy(&o.stdout).contains("collision-forgery"));
}

#[test]
fn csv_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let args = [
        "attack", "--scheme", "dsa", "--model", "ct", "--t", "0", "--trials", "200", "--format", "csv", "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(code(&args), 0);
    let rs = parse_results(&out, Format::Csv).unwrap();
    assert_eq!(rs[0].scheme, "dsa");
    assert_eq!(rs[0].params.jbits, Some(16));
}

#[test]
fn ungranted_oracle_exits_with_two() {
    let o = wrom(&["attack", "--model", "cp-spt", "--scheme", "rsa-fdh", "--attack", "collision"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not granted"));
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(code(&["attack", "--scheme", "rsa-fdh"]), 2);
    assert_eq!(code(&["attack", "--scheme", "rsa-fdh", "--model", "ct", "--t", "3"]), 2);
    assert_eq!(code(&["attack", "--scheme", "rsa-fdh", "--model", "ct", "--l", "33", "--k", "8"]), 2);
    assert_eq!(code(&["bounds", "--bound", "nope"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn unwritable_output_exits_with_two() {
    let args = ["attack", "--scheme", "rsa-fdh", "--model", "ct", "--trials", "10", "--out", "/nonexistent/dir/r.json"];
    let o = wrom(&args);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/dir/r.json"));
}

#[test]
fn tolerance_failure_exits_with_one() {
    assert_eq!(code(&["fidelity", "--samples", "2000", "--tolerance", "0.0001"]), 1);
}

#[test]
fn auxiliary_commands_succeed() {
    assert_eq!(code(&["fidelity", "--samples", "20000", "--tolerance", "0.05"]), 0);
    assert_eq!(code(&["loadtest", "--trials", "2000"]), 0);
    assert_eq!(code(&["abortrate", "--trials", "2000"]), 0);
    assert_eq!(code(&["correctness", "--messages", "50"]), 0);
    assert_eq!(code(&["bounds"]), 0);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn no_timing_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for name in ["a.json", "b.json"] {
        let out = dir.path().join(name);
        let args = [
            "attack", "--scheme", "rsa-pfdh", "--model", "cp-spt", "--k1", "4", "--trials", "300", "--no-timing",
            "--out", out.to_str().unwrap(),
        ];
        assert_eq!(code(&args), 0);
        bodies.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
}
