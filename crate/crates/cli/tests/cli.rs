use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

fn gvint(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gvint")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn workspace(pairing: Value, cutoff: u64, tables: Value) -> Value {
    let rank = pairing.as_array().unwrap().len();
    json!({
        "format": 1,
        "geometry": { "label": "test", "rank": rank, "dim": 3, "canonical_pairing": pairing },
        "truncation": { "weights": vec![1; rank], "cutoff": cutoff },
        "tables": tables,
    })
}

fn ray(kind: &str, n: u32, degrees: Value, values: &[&str]) -> Value {
    let entries: Vec<Value> = values.iter().enumerate().map(|(k, v)| json!([[k + 1], v])).collect();
    json!({ "kind": kind, "n": n, "insertion_degrees": degrees, "entries": entries })
}

fn committed() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/cy3_rank2.json")
}

#[test]
fn validate_committed_workspace() {
    let (code, out, _) = gvint(&["validate", committed().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("ok:"));
}

#[test]
fn validate_reports_missing_divisor() {
    let dir = tempfile::tempdir().unwrap();
    let ws = workspace(json!([0]), 4, json!([{ "kind": "GV", "n": 0, "insertion_degrees": [],
        "entries": [[[1], "1"], [[4], "2"]] }]));
    let f = write(dir.path(), "ws.json", &ws);
    let (code, out, _) = gvint(&["--json", "validate", &f]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    let msg = v["errors"][0]["message"].as_str().unwrap();
    assert!(msg.contains("(2)") && msg.contains("(4)"), "{msg}");
}

#[test]
fn validate_rejects_positive_canonical_pairing() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ws.json", &workspace(json!([0, 1]), 4, json!([])));
    let (code, _, err) = gvint(&["validate", &f]);
    assert_eq!(code, 1);
    assert!(err.contains("semi-positivity"), "{err}");
}

#[test]
fn validate_reports_first_error_per_table() {
    let dir = tempfile::tempdir().unwrap();
    let tables = json!([
        ray("GV", 1, json!([3]), &["1"]),
        ray("GV", 0, json!([]), &["1", "2/4"]),
        ray("GV", 0, json!([]), &["1", "0"]),
    ]);
    let f = write(dir.path(), "ws.json", &workspace(json!([0]), 4, tables));
    let (code, out, _) = gvint(&["--json", "validate", &f]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    let errors = v["errors"].as_array().unwrap();
    assert_eq!(errors.len(), 2);
    assert!(errors[0]["message"].as_str().unwrap().contains("odd insertion degree"));
    assert!(errors[1]["message"].as_str().unwrap().contains("lowest terms"));
}

#[test]
fn unknown_fields_and_versions_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut ws = workspace(json!([0]), 2, json!([]));
    ws["geometry"]["colour"] = json!("red");
    let f = write(dir.path(), "a.json", &ws);
    assert_eq!(gvint(&["validate", &f]).0, 1);
    let mut ws = workspace(json!([0]), 2, json!([]));
    ws["format"] = json!(2);
    let f = write(dir.path(), "b.json", &ws);
    assert_eq!(gvint(&["validate", &f]).0, 1);
}

#[test]
fn missing_file_is_io_error() {
    assert_eq!(gvint(&["validate", "/nonexistent/ws.json"]).0, 3);
}

#[test]
fn gv_to_gw_multiple_cover() {
    let dir = tempfile::tempdir().unwrap();
    let ws = workspace(json!([0]), 3, json!([ray("GV", 0, json!([]), &["1", "0", "0"])]));
    let f = write(dir.path(), "ws.json", &ws);
    let (code, out, _) = gvint(&["transform", &f, "--from", "gv", "--to", "gw"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tables"][0]["kind"], "GW");
    assert_eq!(v["tables"][0]["entries"], json!([[[1], "1"], [[2], "1/8"], [[3], "1/27"]]));
}

#[test]
fn qk_to_gv_output_is_integral() {
    let dir = tempfile::tempdir().unwrap();
    let ws = workspace(json!([0]), 6, json!([ray("QK", 1, json!([2]), &["3", "-1", "4", "1", "-5", "9"])]));
    let f = write(dir.path(), "ws.json", &ws);
    let out = dir.path().join("gv.json");
    let out = out.to_str().unwrap();
    assert_eq!(gvint(&["transform", &f, "--from", "qk", "--to", "gv", "--out", out]).0, 0);
    assert_eq!(gvint(&["check", out, "--integrality"]).0, 0);
}

#[test]
fn gv_to_qk_refuses_n_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ws.json", &workspace(json!([0]), 2, json!([ray("GV", 0, json!([]), &["1", "0"])])));
    let (code, _, err) = gvint(&["transform", &f, "--from", "gv", "--to", "qk"]);
    assert_eq!(code, 1);
    assert!(err.contains("start at n = 1"), "{err}");
}

#[test]
fn degree_hypothesis_names_class_and_relation() {
    let dir = tempfile::tempdir().unwrap();
    // K.beta = -1 on the ray, so one insertion needs complex degree 2 (real 4)
    let f = write(dir.path(), "ws.json", &workspace(json!([-1]), 2, json!([ray("GV", 1, json!([2]), &["1", "0"])])));
    let (code, out, _) = gvint(&["--json", "transform", &f, "--from", "gv", "--to", "qk"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["class"], json!([1]));
    assert!(v["relation"].as_str().unwrap().contains("one-point"));
}

#[test]
fn unsupported_direction() {
    let (code, _, _) = gvint(&["transform", committed().to_str().unwrap(), "--from", "gw", "--to", "qk"]);
    assert_eq!(code, 1);
}

#[test]
fn transform_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let ws = workspace(json!([0]), 4, json!([ray("GV", 0, json!([]), &["1", "0", "0", "0"])]));
    let f = write(dir.path(), "ws.json", &ws);
    let text = dir.path().join("r.txt");
    let js = dir.path().join("r.json");
    for r in [&text, &js] {
        let code = gvint(&["--quiet", "transform", &f, "--from", "gv", "--to", "gw", "--report", r.to_str().unwrap()]).0;
        assert_eq!(code, 0);
    }
    let text = std::fs::read_to_string(text).unwrap();
    assert!(text.contains("multiple cover formula"));
    assert!(text.contains("r = 4: 1/64 * GV(1) = 1/64 * 1 = 1/64"), "{text}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(js).unwrap()).unwrap();
    let four = &v[0]["entries"][3];
    assert_eq!(four["value"], "1/64");
    assert_eq!(four["contributions"].as_array().unwrap().len(), 3);
}

#[test]
fn integrality_flags_offending_class() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ws.json", &workspace(json!([0]), 2, json!([ray("GW", 0, json!([]), &["1", "9/8"])])));
    let (code, out, _) = gvint(&["--json", "check", &f, "--integrality"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["offenders"], json!([{ "table": "gw-n0-0", "class": [2], "value": "9/8" }]));
}

#[test]
fn roundtrip_and_remark_checks() {
    let c = committed();
    let c = c.to_str().unwrap();
    let (code, out, _) = gvint(&["--json", "check", c, "--roundtrip"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["serialization"], "ok");
    assert_eq!(gvint(&["check", c, "--remark-identity"]).0, 0);
    assert_eq!(gvint(&["check", "--arith-identities", "--limit", "300"]).0, 0);
    // exactly one mode
    assert_eq!(gvint(&["check", c, "--roundtrip", "--integrality"]).0, 1);
    assert_eq!(gvint(&["check", c]).0, 1);
}

#[test]
fn remark_identity_needs_n_zero_gv() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ws.json", &workspace(json!([0]), 2, json!([ray("QK", 1, json!([2]), &["1", "0"])])));
    assert_eq!(gvint(&["check", &f, "--remark-identity"]).0, 1);
}

fn ring_workspace(dir: &Path, builtin: &str) -> String {
    let mut ws = workspace(json!([0]), 1, json!([]));
    ws["ring"] = json!({ "builtin": builtin });
    write(dir, &format!("{builtin}.json"), &ws)
}

#[test]
fn hrr_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (ring, k, chi) in [("P2", "1", "3"), ("P1", "0", "1"), ("P3", "-4", "-1"), ("quintic", "1", "5")] {
        let f = ring_workspace(dir.path(), ring);
        let (code, out, err) = gvint(&["--json", "hrr", &f, "--bundle", k]);
        assert_eq!(code, 0, "{err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["chi"], chi, "{ring} O({k})");
        assert_eq!(v["expected"], chi);
    }
}

#[test]
fn hrr_needs_ring() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ws.json", &workspace(json!([0]), 1, json!([])));
    let (code, _, err) = gvint(&["hrr", &f, "--bundle", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("no ring block"));
}

#[test]
fn invalid_ring_and_k_model_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut ws = workspace(json!([0]), 1, json!([]));
    // top class not in the basis
    ws["ring"] = json!({ "label": "bad", "dim": 1, "basis": [{ "name": "1", "degree": 0 }, { "name": "H", "degree": 1 }],
        "products": [], "top": "X", "chern": [{ "H": "2" }] });
    assert_eq!(gvint(&["validate", &write(dir.path(), "a.json", &ws)]).0, 1);
    ws["ring"] = json!({ "builtin": "P2" });
    ws["k_model"] = json!({ "builtin": "cy3" });
    assert_eq!(gvint(&["validate", &write(dir.path(), "b.json", &ws)]).0, 1);
    ws["k_model"] = json!({ "builtin": "projective" });
    assert_eq!(gvint(&["validate", &write(dir.path(), "c.json", &ws)]).0, 0);
}
