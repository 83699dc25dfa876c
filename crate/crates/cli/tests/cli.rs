use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bowtie-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const K5: &str = r#"{"vertices":[0,1,2,3,4],"edges":[[0,1],[0,2],[0,3],[0,4],[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]]}"#;
const TRIANGLE: &str = r#"{"vertices":[0,1,2],"edges":[[0,1],[0,2],[1,2]]}"#;
const K4: &str = r#"{"vertices":[0,1,2,3],"edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#;

#[test]
fn check_k5_reports_bowtie() {
    let dir = TempDir::new().unwrap();
    let out = run(&["check", p(&write(&dir, "k5.json", K5))]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["error"], "ContainsBowtie");
    assert_eq!(report["witness"].as_array().unwrap().len(), 5);
}

#[test]
fn check_special_graph() {
    let dir = TempDir::new().unwrap();
    let out = run(&["check", p(&write(&dir, "k4.json", K4))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["special"], true);
}

#[test]
fn specialize_triangle_gives_k4() {
    let dir = TempDir::new().unwrap();
    let out = run(&["specialize", p(&write(&dir, "t.json", TRIANGLE))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), K4);
}

#[test]
fn decompose_non_special_fails() {
    let dir = TempDir::new().unwrap();
    let out = run(&["decompose", p(&write(&dir, "t.json", TRIANGLE))]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"], "NotSpecial");
}

#[test]
fn decompose_dot_dashes_cross_edges() {
    let dir = TempDir::new().unwrap();
    let g = r#"{"vertices":[0,1,2,3,4,5,6,7],"edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3],[3,4],[4,5],[4,6],[4,7],[5,6],[5,7],[6,7]]}"#;
    let out = run(&["decompose", p(&write(&dir, "g.json", g)), "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph G {"));
    assert!(text.contains("3 -- 4 [style=dashed];"));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"vertices":[0,1],"edges":[[1,0]]}"#);
    let out = run(&["check", p(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    let unknown = write(
        &dir,
        "unknown.json",
        r#"{"vertices":[],"edges":[],"extra":1}"#,
    );
    assert_eq!(run(&["check", p(&unknown)]).status.code(), Some(2));
    assert_eq!(run(&["check", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(
        run(&["enumerate", "4", "--format", "dot"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn amalgamating_triangles_over_a_vertex_is_rejected() {
    let dir = TempDir::new().unwrap();
    let vertex = write(&dir, "v.json", r#"{"vertices":[0],"edges":[]}"#);
    let tri = write(&dir, "t.json", TRIANGLE);
    let map = write(&dir, "m.json", r#"{"0":0}"#);
    let out = run(&["amalgamate", p(&vertex), p(&tri), p(&tri), p(&map), p(&map)]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["violation"], "output_contains_bowtie");
    assert_eq!(report["witness"], serde_json::json!([0, 1, 2, 3, 4]));
    assert_eq!(
        report["amalgam"]["graph"]["vertices"]
            .as_array()
            .unwrap()
            .len(),
        5
    );
}

#[test]
fn amalgamate_and_union() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.json", K4);
    let id = write(&dir, "id.json", r#"{"0":0,"1":1,"2":2,"3":3}"#);
    let out = run(&["amalgamate", p(&k4), p(&k4), p(&k4), p(&id), p(&id)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), K4);
    let out = run(&["union", p(&k4), p(&k4)]);
    assert_eq!(stdout_json(&out)["vertices"].as_array().unwrap().len(), 8);
}

#[test]
fn closure_and_special_edges() {
    let dir = TempDir::new().unwrap();
    let chimney = write(
        &dir,
        "c.json",
        r#"{"vertices":[0,1,2,3],"edges":[[0,1],[0,2],[0,3],[1,2],[1,3]]}"#,
    );
    let out = run(&["acl", p(&chimney), "--set", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["closure"], serde_json::json!([0, 1, 2]));
    assert_eq!(report["provenance"]["2"]["rule"], "input");
    let out = run(&["special-edges", p(&chimney)]);
    assert_eq!(stdout_json(&out), serde_json::json!([[0, 1]]));
    assert_eq!(
        run(&["acl", p(&chimney), "--set", "9"]).status.code(),
        Some(2)
    );
}

#[test]
fn necklace_of_rotation() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.json", K4);
    let map = write(&dir, "rot.json", r#"{"0":1,"1":2,"2":3,"3":0}"#);
    let out = run(&["necklace", p(&k4), "--map", p(&map)]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["n"], 4);
    assert_eq!(report["automorphism"]["3"], 0);
    let not_iso = write(&dir, "bad.json", r#"{"0":0,"1":0}"#);
    assert_eq!(
        run(&["necklace", p(&k4), "--map", p(&not_iso)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn close_system_and_system_amalgam() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.json", K4);
    let map = write(&dir, "m.json", r#"{"0":1}"#);
    let out = run(&["close-system", p(&k4), "--map", p(&map)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["map"].as_object().unwrap().len(), 4);

    let system = write(
        &dir,
        "s.json",
        &format!(r#"{{"graph":{K4},"automorphism":{{"0":1,"1":2,"2":3,"3":0}}}}"#),
    );
    let id = write(&dir, "id.json", r#"{"0":0,"1":1,"2":2,"3":3}"#);
    let out = run(&[
        "amalgamate-systems",
        p(&system),
        p(&system),
        p(&system),
        p(&id),
        p(&id),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["automorphism"]["0"], 1);
}

#[test]
fn build_and_certify_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    for path in [&first, &second] {
        let out = run(&[
            "build",
            "--cap",
            "4",
            "--budget",
            "200",
            "--seed",
            "7",
            "--out",
            p(path),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap()
    );
    let out = run(&["certify", p(&first), "--snapshot", "0", "--cap", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["unextended"], serde_json::json!([]));
    assert_eq!(
        run(&["certify", p(&first), "--snapshot", "999"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn witness_round_trip() {
    let dir = TempDir::new().unwrap();
    let w = dir.path().join("w.json");
    let dot = dir.path().join("w.dot");
    let out = run(&["witness", "--k", "3", "--out", p(&w), "--dot", p(&dot)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&dot)
        .unwrap()
        .starts_with("graph G {"));
    let out = run(&["verify-witness", p(&w)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["passed"], true);
    let out = run(&["witness", "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"], "InvalidK");
}

#[test]
fn enumerate_and_export_dot() {
    let out = run(&["enumerate", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out).as_array().unwrap().len(), 2);
    let dir = TempDir::new().unwrap();
    let out = run(&["export-dot", p(&write(&dir, "t.json", TRIANGLE))]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "graph G {\n  0;\n  1;\n  2;\n  0 -- 1;\n  0 -- 2;\n  1 -- 2;\n}\n"
    );
}

#[test]
fn thread_variable_is_validated() {
    let out = bin()
        .env("BOWTIE_LAB_THREADS", "lots")
        .args(["enumerate", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .env("BOWTIE_LAB_THREADS", "2")
        .args(["enumerate", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
