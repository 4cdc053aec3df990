use assert_cmd::Command;
use serde_json::Value;
use spinwreath_core::CycScalar;

fn spinwreath() -> Command {
    Command::cargo_bin("spinwreath").unwrap()
}

fn json_of(out: &[u8]) -> Value {
    serde_json::from_slice(out).unwrap()
}

fn int_value(v: &Value) -> i64 {
    serde_json::from_value::<CycScalar>(v.clone()).unwrap().to_i64().unwrap()
}

#[test]
fn chartable_trivial_three() {
    let out = spinwreath().args(["chartable", "--gamma", "trivial", "--n", "3", "--check"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out.stdout);
    let values: Vec<Vec<i64>> = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["values"].as_array().unwrap().iter().map(int_value).collect())
        .collect();
    assert_eq!(values, vec![vec![8, 2], vec![4, -2]]);
}

#[test]
fn chartable_csv_is_square() {
    let out = spinwreath().args(["chartable", "--gamma", "cyclic:2", "--n", "2", "--format", "csv"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(&out.stdout[..]);
    let header = r.headers().unwrap().clone();
    let rows: Vec<_> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(header.len(), 3 + 3);
}

#[test]
fn chartable_empty_partition() {
    let out = spinwreath().args(["chartable", "--gamma", "trivial", "--n", "0"]).output().unwrap();
    let doc = json_of(&out.stdout);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 1);
    assert_eq!(int_value(&doc["rows"][0]["values"][0]), 1);
}

#[test]
fn classes_with_oracle() {
    let out = spinwreath().args(["classes", "--gamma", "trivial", "--n", "3", "--oracle"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out.stdout);
    assert_eq!(doc["even_split_pairs"], 2);
    assert_eq!(doc["odd_split_pairs"], 1);
    assert_eq!(doc["oracle"]["status"], "OK");
}

#[test]
fn classes_cyclic_two() {
    let out = spinwreath().args(["classes", "--gamma", "cyclic:2", "--n", "2"]).output().unwrap();
    assert_eq!(json_of(&out.stdout)["even_split_pairs"], 3);
}

#[test]
fn invalid_gamma_file_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"name\": \"broken\"}").unwrap();
    let out = spinwreath().args(["classes", "--n", "2", "--gamma"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("configuration error"));
}

#[test]
fn clifford_guard() {
    let out = spinwreath().args(["verify", "clifford", "--gamma", "cyclic:2", "--xi", "mckay"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn clifford_passes_on_standard_form() {
    let out = spinwreath().args(["verify", "clifford", "--gamma", "cyclic:2", "--window", "2", "--degree", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out.stdout);
    assert!(doc.as_array().unwrap().iter().all(|r| r["status"] == "pass"));
}

#[test]
fn affine_literal_fails_and_corrected_passes() {
    let base = ["verify", "affine", "--gamma", "cyclic:2", "--degree", "4", "--window", "2"];
    let out = spinwreath().args(base).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let failing: Vec<String> = json_of(&out.stdout)
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "fail")
        .map(|r| r["relation"].as_str().unwrap().to_string())
        .collect();
    assert!(!failing.is_empty() && failing.iter().all(|r| r.contains("delta C")), "{failing:?}");
    let out = spinwreath().args(base).args(["--xx-form", "corrected"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn oracle_suite() {
    let out = spinwreath().args(["verify", "oracle", "--gamma", "trivial", "--n", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn mckay_types() {
    let out = spinwreath().args(["mckay", "--gamma", "cyclic:4"]).output().unwrap();
    assert_eq!(json_of(&out.stdout)["affine_type"], "A_3^(1)");
    let out = spinwreath().args(["mckay", "--gamma", "quaternion8"]).output().unwrap();
    assert_eq!(json_of(&out.stdout)["affine_type"], "D_4^(1)");
    let out = spinwreath().args(["mckay", "--gamma", "trivial"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out_path = dir.path().join("table.json");
    std::fs::write(&cfg, format!("gamma = \"trivial\"\nn = 2\noutput = {:?}\n", out_path.to_str().unwrap())).unwrap();
    let out = spinwreath().arg("--config").arg(&cfg).args(["chartable", "--n", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["n"], 3);
}

#[test]
fn output_is_deterministic() {
    let run = || spinwreath().args(["chartable", "--gamma", "cyclic:3", "--n", "2"]).output().unwrap().stdout;
    assert_eq!(run(), run());
}

#[test]
fn guard_rejects_large_n() {
    let out = spinwreath().args(["verify", "oracle", "--gamma", "trivial", "--n", "6"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
