//! End-to-end checks of the `amm` binary.

use std::process::{Command, Output};

fn amm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn rank_of_k2() {
    let out = amm(&["rank", "--g6", "A_"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1");
}

#[test]
fn matrix_of_k3_json() {
    let out = amm(&["matrix", "--g6", "Bw", "--format", "json"]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(parsed["rank"], 3);
    assert_eq!(parsed["matrix"][0][0], "5/9");
    assert_eq!(parsed["matrix"][0][1], "2/9");
}

#[test]
fn check_p3_passes() {
    let out = amm(&["check", "--g6", "Bg"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("pass gram_identity"));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn census_builtin_n3_csv() {
    let out = amm(&["census", "--n", "3", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "n,rank,count,simple_count\n3,2,1,1\n3,3,1,0\n");
}

#[test]
fn walk_and_avg_smoke() {
    let out = amm(&["walk", "--g6", "A_", "--t", "0.785398163"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0.5000000"));

    let out = amm(&["avg", "--g6", "Bg", "--T", "100"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("distance to limit"));
}

#[test]
fn input_errors_exit_2() {
    let out = amm(&["rank", "--g6", "!!"]);
    assert_eq!(out.status.code(), Some(2));

    let out = amm(&["rank"]);
    assert_eq!(out.status.code(), Some(2));

    let out = amm(&["census", "--file", "/nonexistent/corpus.g6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn states_of_k2() {
    let out = amm(&["states", "--g6", "A_"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("average state of vertex 0"));
    assert!(text.contains("1/2 0"));
}

#[test]
fn spectrum_json() {
    let out = amm(&["spectrum", "--g6", "Bg", "--format", "json"]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(parsed["amm_trace"], "5/4");
    assert_eq!(parsed["rank"], 2);
}
