use std::path::PathBuf;
use std::process::Command;

use kdescent::cli::{run, Outcome, EXIT_INVALID, EXIT_PROPERTY};
use serde_json::Value;

fn kdescent(args: &[&str]) -> Outcome {
    run(std::iter::once("kdescent").chain(args.iter().copied()))
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares with a golden file; `KDESCENT_BLESS=1` rewrites it.
fn assert_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("KDESCENT_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {name}"));
    assert_eq!(actual, want, "{name} differs");
}

#[test]
fn kd_nodal_table() {
    let out = kdescent(&["kd", "nodal.json", "--range", "-2..1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_golden("kd_nodal.txt", &out.stdout);
    assert!(out.stdout.contains("-1  Z     gr_1 = Z"));
    assert!(out.stdout.contains("0   Z^2   gr_0 = Z^2"));
}

#[test]
fn kd_nodal_json() {
    let out = kdescent(&["kd", "nodal", "--range", "-2..1", "--format", "json"]);
    assert_eq!(out.code, 0);
    assert_golden("kd_nodal.json", &out.stdout);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["command"], "kd");
    assert_eq!(v["status"], "ok");
    let rows = v["results"]["rows"].as_array().unwrap();
    // a trivial group is a rank-0 entry
    assert_eq!(rows[0]["group"]["rank"], 0);
    assert_eq!(rows[1]["group"]["rank"], 1);
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn nodal_second_page_has_two_cells() {
    let out = kdescent(&["ss", "nodal", "--pages", "2", "--format", "json"]);
    assert_eq!(out.code, 0);
    assert_golden("ss_nodal.json", &out.stdout);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["results"]["pages"][1]["entries"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        vec!["kd", "disjoint", "--format", "json"],
        vec!["blowup", "blowup_p2_point"],
        vec!["f2", "--format", "json"],
        vec!["compare", "nodal", "--inflate"],
        vec!["check-axioms", "--seed", "3", "--count", "20"],
    ] {
        assert_eq!(kdescent(&args), kdescent(&args), "{args:?}");
    }
}

#[test]
fn digest_changes_with_input_bytes() {
    let dir = std::env::temp_dir().join(format!("kdescent-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let text = kdescent::kweight::corpus::builtin("cusp").unwrap();
    std::fs::write(&a, text).unwrap();
    std::fs::write(&b, format!("{text}\n")).unwrap();
    let digest = |p: &PathBuf| {
        let out = kdescent(&["kd", p.to_str().unwrap(), "--format", "json"]);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        v["inputs"][0]["sha256"].as_str().unwrap().to_string()
    };
    assert_ne!(digest(&a), digest(&b));
    std::fs::write(&b, text).unwrap();
    assert_eq!(digest(&a), digest(&b));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn non_commuting_face_exits_one_with_location() {
    let out = kdescent(&["validate", "bad.json"]);
    assert_eq!(out.code, EXIT_INVALID);
    assert!(out.stderr.contains("face 00->11"), "{}", out.stderr);
    assert!(out.stdout.is_empty());
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(kdescent(&["kd", "no-such-document"]).code, EXIT_INVALID);
    assert_eq!(kdescent(&["frobnicate"]).code, EXIT_INVALID);
    assert_eq!(kdescent(&["kd", "nodal", "--range", "3..1"]).code, EXIT_INVALID);
    assert_eq!(kdescent(&["kdc", "nodal"]).code, EXIT_INVALID);
    let dir = std::env::temp_dir().join(format!("kdescent-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("broken.json");
    std::fs::write(&p, "{\"cube\": 1,").unwrap();
    let out = kdescent(&["validate", p.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INVALID);
    assert!(out.stderr.contains("malformed JSON"), "{}", out.stderr);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn mismatch_exits_two_and_names_the_witness() {
    let out = kdescent(&["compare", "nodal", "cusp", "--range", "-2..1"]);
    assert_eq!(out.code, EXIT_PROPERTY);
    assert!(out.stdout.contains("FAILED hyperresolution-independence: n = -1"));
    let json = kdescent(&["compare", "nodal", "cusp", "--format", "json"]);
    let v: Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v["status"], "property-failure");
    assert_eq!(v["violations"][0]["property"], "hyperresolution-independence");
}

#[test]
fn axiom_suite_passes() {
    let out = kdescent(&["check-axioms", "--seed", "7", "--max-cube", "2"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("200 diagrams"));
}

#[test]
fn every_shipped_document_validates_except_bad() {
    let names: Vec<&str> = kdescent::kweight::corpus::DOCUMENTS
        .iter()
        .map(|(n, _)| *n)
        .filter(|n| *n != "bad")
        .collect();
    let mut args = vec!["validate"];
    args.extend(&names);
    let out = kdescent(&args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.lines().count(), names.len());
}

#[test]
fn other_commands_succeed() {
    for args in [
        vec!["simple", "nodal"],
        vec!["simple", "blowup_p2_point"],
        vec!["ss", "nodal_inflated", "--range=-2..1"],
        vec!["kdc", "compact_two_points"],
        vec!["kdc", "compact_empty"],
        vec!["f2", "blowup_p3_line"],
        vec!["kd", "smooth_p2", "--timing"],
    ] {
        let out = kdescent(&args);
        assert_eq!(out.code, 0, "{args:?}: {}{}", out.stdout, out.stderr);
    }
}

#[test]
fn out_flag_writes_the_report() {
    let p = std::env::temp_dir().join(format!("kdescent-out-{}.json", std::process::id()));
    let out = kdescent(&["kd", "cusp", "--format", "json", "--out", p.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&p).unwrap();
    assert_eq!(written, kdescent(&["kd", "cusp", "--format", "json"]).stdout);
    std::fs::remove_file(&p).ok();
}

#[test]
fn binary_propagates_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_kdescent");
    let ok = Command::new(bin).args(["kd", "nodal"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["validate", "bad"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("face 00->11"));
    let prop = Command::new(bin).args(["compare", "nodal", "cusp"]).output().unwrap();
    assert_eq!(prop.status.code(), Some(2));
}
