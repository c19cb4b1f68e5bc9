//! End-to-end runs of the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn singer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn gen_prints_the_trace_set() {
    let out = singer(&["pds", "gen", "--q", "2"]);
    let val = stdout_json(&out);
    assert_eq!(val["elems"], serde_json::json!([1, 2, 4]));
    assert_eq!(val["v"], 7);
}

#[test]
fn exit_codes_separate_failure_kinds() {
    // valid set: success
    assert_eq!(
        singer(&["pds", "verify", "--set", "1,2,4", "--q", "2"]).status.code(),
        Some(0)
    );
    // well-formed input that fails the check
    assert_eq!(
        singer(&["pds", "verify", "--set", "1,2,5", "--q", "2"]).status.code(),
        Some(1)
    );
    // malformed input
    assert_eq!(singer(&["pds", "gen", "--q", "6"]).status.code(), Some(2));
    assert_eq!(
        singer(&["pds", "verify", "--set", "1,x,4", "--q", "2"]).status.code(),
        Some(2)
    );
    // usage errors come from the parser
    assert_eq!(singer(&["pds", "frobnicate"]).status.code(), Some(2));
}

#[test]
fn build_verify_and_emit_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.json");
    let built = singer(&["tripres", "build", "--set", "0,1,3,9", "--q", "3", "--m", "q"]);
    assert!(built.status.success());
    std::fs::write(&file, &built.stdout).unwrap();
    let path = file.to_str().unwrap();

    let verified = singer(&["tripres", "verify", "--file", path]);
    let report = stdout_json(&verified);
    assert_eq!(report["ok"], true);

    let gap = singer(&["group", "emit", "--kind", "gammaT", "--in", path]);
    let gap_text = String::from_utf8(gap.stdout).unwrap();
    assert!(gap_text.starts_with("F := FreeGroup(\"a0\""));
    assert!(gap_text.contains("G := F / rels;;"));

    let magma = singer(&["group", "emit", "--kind", "singer", "--in", path, "--format", "magma"]);
    let magma_text = String::from_utf8(magma.stdout).unwrap();
    assert!(magma_text.starts_with("G<s0, s1, s2> := Group<"));

    let json = singer(&["group", "emit", "--kind", "tilde", "--in", path, "--format", "json"]);
    let pres = stdout_json(&json);
    assert_eq!(pres["kind"], "tilde");
    assert_eq!(pres["generators"].as_array().unwrap().len(), 13 + 2);

    assert_eq!(
        singer(&["group", "emit", "--kind", "gammaT", "--in", path, "--format", "latex"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn corrupted_presentation_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    // drop one class so pair coverage fails
    let built = singer(&["tripres", "build", "--set", "1,2,4", "--q", "2", "--m", "q"]);
    let mut val: serde_json::Value = serde_json::from_slice(&built.stdout).unwrap();
    let classes = val["classes"].as_array_mut().unwrap();
    classes.pop();
    std::fs::write(&file, serde_json::to_string(&val).unwrap()).unwrap();
    let out = singer(&["tripres", "verify", "--file", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn link_checks_pass_for_a_built_presentation() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.json");
    let built = singer(&["tripres", "build", "--set", "1,2,4", "--q", "2", "--m", "q"]);
    std::fs::write(&file, &built.stdout).unwrap();
    let path = file.to_str().unwrap();

    let report = stdout_json(&singer(&["link", "check", "--in", path]));
    assert_eq!(report["biregular"], true);
    assert_eq!(report["girth"], 6);
    assert_eq!(report["matches_incidence"], true);

    let count = singer(&["link", "cycles", "--in", path, "--count-only"]);
    assert_eq!(String::from_utf8_lossy(&count.stdout).trim(), "28");
}

#[test]
fn equivalence_of_the_two_order_three_variants() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, m) in [(&a, "q"), (&b, "q2")] {
        let built = singer(&["tripres", "build", "--set", "0,1,3,9", "--q", "3", "--m", m]);
        std::fs::write(path, &built.stdout).unwrap();
    }
    let out = singer(&[
        "tripres", "equiv", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap(),
    ]);
    let witness = stdout_json(&out);
    assert!(witness.get("route").is_some());
}

#[test]
fn reproduce_table_reports_every_row() {
    let out = singer(&["reproduce-table", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().all(|l| l.contains("pass")));
}

#[test]
fn pipeline_writes_the_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = singer(&[
        "pipeline", "--q", "2", "--out", dir.path().to_str().unwrap(),
    ]);
    let report = stdout_json(&out);
    assert_eq!(report["variant_count"], 2);
    for name in ["pds.json", "plane.json", "manifest.json", "gammat.gap"] {
        assert!(Path::new(dir.path()).join(name).exists(), "missing {name}");
    }
}
