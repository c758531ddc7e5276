use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const Q3: &str = "3\n1 2 3\n3 2 1\n1 2 3\n";
const R3: &str = "3\n1 3 2\n3 2 1\n2 1 3\n";
const BROKEN: &str = "2\n2 1\n1 2\n";
const RAGGED: &str = "2\n1 2\n2\n";
const Z2XZ2: &str = "4\n1 2 3 4\n2 1 4 3\n3 4 1 2\n4 3 2 1\n";

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn qf(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qf"));
    cmd.args(args).env_remove("QF_CAPS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn run(args: &[&str]) -> Output {
    qf(args, &[])
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn validate_accepts_q3() {
    let d = TempDir::new().unwrap();
    let q3 = write(&d, "q3.qnd", Q3);
    let out = run(&["validate", "--text", s(&q3)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "valid quandle, n=3");
    let out = run(&["validate", s(&q3)]);
    assert_eq!(json(&out)["message"], "valid quandle, n=3");
}

#[test]
fn validate_rejects_axiom_violation_with_witness() {
    let d = TempDir::new().unwrap();
    let bad = write(&d, "broken.qnd", BROKEN);
    let out = run(&["validate", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["valid"], false);
    assert_eq!(v["axiom"], "a");
    assert_eq!(v["witness"]["x"], 1);
}

#[test]
fn malformed_input_exits_2() {
    let d = TempDir::new().unwrap();
    let ragged = write(&d, "ragged.qnd", RAGGED);
    for sub in ["validate", "envelope", "qconj"] {
        let out = run(&[sub, s(&ragged)]);
        assert_eq!(out.status.code(), Some(2), "{sub}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("malformed"));
    }
    assert_eq!(run(&["envelope", s(&d.path().join("missing.qnd"))]).status.code(), Some(2));
    // bad flags are rejected before dispatch
    let q3 = write(&d, "q3.qnd", Q3);
    assert_eq!(run(&["separate", "--prime-cap", "1", s(&q3)]).status.code(), Some(2));
    assert_eq!(run(&["--jobs", "0", "envelope", s(&q3)]).status.code(), Some(2));
}

#[test]
fn qconj_identifies_x_and_z() {
    let d = TempDir::new().unwrap();
    let q3 = write(&d, "q3.qnd", Q3);
    let v = json(&run(&["qconj", s(&q3)]));
    assert_eq!(v["qconj_size"], 2);
    assert_eq!(v["injective"], false);
    assert_eq!(v["identified_pairs"], serde_json::json!([[1, 3]]));
    assert_eq!(v["theta"], serde_json::json!([1, 2, 1]));
}

#[test]
fn envelope_report_fields() {
    let d = TempDir::new().unwrap();
    let r3 = write(&d, "r3.qnd", R3);
    let v = json(&run(&["envelope", s(&r3)]));
    for key in ["inn_order", "transversal_size", "K", "qconj_size", "injective", "abelianization", "gamma2"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["inn_order"], 6);
    assert_eq!(v["K"], serde_json::json!({ "rank": 1, "torsion": [] }));
    assert_eq!(v["abelianization"]["rank"], 1);
}

#[test]
fn invariants_and_classify() {
    let d = TempDir::new().unwrap();
    let q3 = write(&d, "q3.qnd", Q3);
    let v = json(&run(&["invariants", s(&q3)]));
    assert_eq!(v["betti"], serde_json::json!([1, 2, 1]));
    assert_eq!(v["orbit_count"], 2);
    assert_eq!(v["nilpotent"], true);
    let r3 = write(&d, "r3.qnd", R3);
    let c = json(&run(&["classify", s(&r3)]));
    assert_eq!(c["indecomposable"], true);
    assert_eq!(c["nilpotent"], false);
    assert_eq!(c["solvable"], true);
}

#[test]
fn represent_dense_and_block_sparse() {
    let d = TempDir::new().unwrap();
    let r3 = write(&d, "r3.qnd", R3);
    let dense = json(&run(&["represent", s(&r3)]));
    assert_eq!(dense["relations_hold"], true);
    assert_eq!(dense["probe"]["faithful"], true);
    let dim = dense["dim"].as_u64().unwrap() as usize;
    let m = dense["matrices"][0].as_array().unwrap();
    assert_eq!(m.len(), dim);
    assert!(m.iter().all(|row| row.as_array().unwrap().iter().all(|e| e.is_string())));
    let sparse = json(&run(&["represent", "--block-sparse", "--length-bound", "2", s(&r3)]));
    assert_eq!(sparse["probe"]["length_bound"], 2);
    assert_eq!(sparse["matrices"][0]["blocks"].as_array().unwrap().len(), 6);
}

#[test]
fn separate_respects_prime_cap() {
    let d = TempDir::new().unwrap();
    let r3 = write(&d, "r3.qnd", R3);
    let v = json(&run(&["separate", "--prime-cap", "97", s(&r3)]));
    assert!(v["prime"].as_u64().unwrap() <= 97);
    assert_eq!(v["used_qconj"], false);
}

#[test]
fn homsearch_into_conj_and_core() {
    let d = TempDir::new().unwrap();
    let r3 = write(&d, "r3.qnd", R3);
    let g = write(&d, "v4.grp", Z2XZ2);
    let v = json(&run(&["homsearch", s(&r3), "--target", s(&g)]));
    assert_eq!(v["count"], 4);
    assert_eq!(v["component_constant"], true);
    let core = json(&run(&["homsearch", s(&r3), "--target", s(&g), "--target-group", "core"]));
    assert_eq!(core["target_group"], "core");
    assert!(core["component_constant"].is_null());
}

#[test]
fn caps_env_var_is_honoured() {
    let d = TempDir::new().unwrap();
    let r3 = write(&d, "r3.qnd", R3);
    let out = qf(&["envelope", s(&r3)], &[("QF_CAPS", "inn=2")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource cap"));
    assert_eq!(qf(&["envelope", s(&r3)], &[("QF_CAPS", "nonsense")]).status.code(), Some(2));
}

#[test]
fn directory_input_is_sorted_isolated_and_deterministic() {
    let d = TempDir::new().unwrap();
    write(&d, "b_r3.qnd", R3);
    write(&d, "a_q3.qnd", Q3);
    write(&d, "c_broken.qnd", BROKEN);
    let dir = s(d.path());
    let first = run(&["--jobs", "3", "invariants", dir]);
    assert_eq!(first.status.code(), Some(1));
    let v = json(&first);
    let entries = v.as_array().unwrap();
    let names: Vec<&str> = entries.iter().map(|e| e["file"].as_str().unwrap()).collect();
    assert!(names[0].ends_with("a_q3.qnd") && names[1].ends_with("b_r3.qnd") && names[2].ends_with("c_broken.qnd"));
    assert!(entries[0]["report"].is_object() && entries[1]["report"].is_object());
    assert_eq!(entries[2]["error"]["kind"], "axiom");
    let again = run(&["--jobs", "1", "invariants", dir]);
    assert_eq!(first.stdout, again.stdout);
}

#[test]
fn text_output_is_a_table() {
    let d = TempDir::new().unwrap();
    let q3 = write(&d, "q3.qnd", Q3);
    let out = stdout(&run(&["--text", "envelope", s(&q3)]));
    assert!(out.lines().any(|l| l.starts_with("inn_order") && l.trim_end().ends_with('2')));
    assert!(out.lines().any(|l| l.starts_with("K.rank")));
}
