use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nilrand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilrand"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn classify_finite() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "g.txt", "2 2\na1^2\na2^3\n");
    let out = nilrand(&["classify", &f]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["regime"], "FINITE");
    assert_eq!(v["diophantine"], "DECIDABLE");
}

#[test]
fn word_eval_collects() {
    let out = nilrand(&["word-eval", "a2 a1"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["malcev"]["text"], "a1 a2 [a1,a2]^-1");
    assert_eq!(v["rank"], 2);
}

#[test]
fn rank_exp_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"m": 2, "r": 1, "lengths": [5, 20], "trials": 300, "seed": 11}"#,
    );
    let a = nilrand(&["rank-exp", &cfg]);
    let b = nilrand(&["--jobs", "1", "rank-exp", &cfg]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("# config: "));
    assert!(text.contains("\"seed\":11"));
    assert!(text.lines().nth(1).unwrap().starts_with("length,trials,full_rank_count"));
}

#[test]
fn seed_is_required() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"m": 2, "r": 1, "lengths": [5], "trials": 10}"#);
    let out = nilrand(&["rank-exp", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let with = nilrand(&["rank-exp", &cfg, "--seed", "3"]);
    assert!(with.status.success());
    assert!(String::from_utf8(with.stdout).unwrap().contains("\"seed\":3"));
    assert_eq!(nilrand(&["clt", "--m", "2", "--n", "10", "--trials", "5"]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Rank-deficient: the word problem is not decided.
    let f = write(dir.path(), "g.txt", "2 2\na1 a2\na1^2 a2^2\n");
    let out = nilrand(&["is-trivial", &f, "a1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"]["kind"], "inconclusive");

    let bad = write(dir.path(), "bad.txt", "2 2\na1 ^^\n");
    let out = nilrand(&["classify", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "parse");

    assert_eq!(nilrand(&["classify"]).status.code(), Some(2));
    assert_eq!(nilrand(&["classify", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn is_trivial_in_quotient() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "g.txt", "2 2\na1^2\n");
    let yes = stdout_json(&nilrand(&["is-trivial", &f, "[a1,a2]^2"]));
    assert_eq!(yes["trivial"], true);
    let no = stdout_json(&nilrand(&["is-trivial", &f, "[a1,a2]"]));
    assert_eq!(no["trivial"], false);
}

#[test]
fn compile_solve_verify() {
    let dir = tempfile::tempdir().unwrap();
    let ring = write(
        dir.path(),
        "ring.json",
        r#"{"variables": ["x"], "equations": [[["*", ["var", "x"], ["var", "x"]], ["const", 4]]]}"#,
    );
    let out = nilrand(&["compile", &ring]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sys = write(dir.path(), "sys.json", &String::from_utf8(out.stdout).unwrap());
    let solved = stdout_json(&nilrand(&["solve-bounded", &sys, "--box", "4"]));
    assert_eq!(solved["count"], 2);

    let report = stdout_json(&nilrand(&["verify", &ring, "--box-ring", "5", "--box-group", "4"]));
    assert_eq!(report["ring_solutions"], 2);
    assert_eq!(report["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn table_commands() {
    let out = nilrand(&["sz-check", "--r", "1", "--m", "2", "--b", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1,2,1,9,1,6,true"), "{text}");

    let out = nilrand(&["--format", "json", "return-prob", "--m", "1", "--n-max", "4"]);
    let v = stdout_json(&out);
    assert_eq!(v["rows"][0]["exact_value"], "1");
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);

    let out = nilrand(&["--format", "csv", "classify", "x"]);
    assert_eq!(out.status.code(), Some(2));
}
