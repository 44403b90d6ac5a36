use std::process::Command;

use serde_json::Value;

fn verlinde() -> Command {
    Command::new(env!("CARGO_BIN_EXE_verlinde"))
}

fn succeeds(args: &[&str]) -> String {
    let out = verlinde().args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let out = verlinde().args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn project_a2() {
    let out = verlinde().args(["project", "A2", "6", "4,4"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), r#"{"status":"signed","sign":-1,"weight":[0,3,3]}"#);
    assert_eq!(json_of(&["project", "A2", "6", "5,2"])["status"], "null");
}

#[test]
fn verify_e6_level_two() {
    let out = verlinde().args(["verify", "E6", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("48 variables, all positive"));
    assert!(text.contains("- iteration 1: 261 determined"));
}

#[test]
fn verify_json_report_and_data_source() {
    let r = json_of(&["verify", "E6", "2", "--seed-source", "data", "--report", "json"]);
    assert_eq!(r["type"], "E6");
    assert_eq!(r["counts"]["variables"], 48);
    assert_eq!(r["iterations"].as_array().unwrap().len(), 2);
    assert_eq!(r["images"].as_array().unwrap().len(), 48);
    assert_eq!(r["positivity"], true);
    assert_eq!(r["frozen_units"], true);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify", "E6", "1"],
        vec!["project", "A2", "6", "4,x"],
        vec!["project", "A2", "6", "1,2,3"],
        vec!["cartan", "info", "Q7"],
        vec!["frobnicate"],
        vec!["rep", "dim", "A2", "-1,0"],
        vec!["verify", "E6", "2", "--seed-source", "oracle"],
    ] {
        let out = verlinde().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn cartan_info_json() {
    let v = json_of(&["cartan", "info", "G2", "--json"]);
    assert_eq!(v["t"], serde_json::json!([3, 1]));
    assert_eq!(v["h_vee"], 4);
    assert_eq!(v["comarks"], serde_json::json!([1, 1, 2]));
}

#[test]
fn fusion_commands() {
    let b = json_of(&["fusion", "basis", "A2", "3", "--json"]);
    assert_eq!(b["basis"].as_array().unwrap().len(), 10);
    let m = json_of(&["fusion", "mul", "A1", "3", "1", "1", "--json"]);
    assert_eq!(m["v"], "V_0 + V_2");
    let q = json_of(&["fusion", "qdim", "A2", "6", "2,2", "--json"]);
    assert!((q["qdim"].as_f64().unwrap() - 8.63816).abs() < 1e-5);
    let s = json_of(&["fusion", "smatrix", "A1", "2"]);
    assert!(s["unitarity_defect"].as_f64().unwrap() < 1e-9);
}

#[test]
fn rep_and_kr_commands() {
    assert_eq!(json_of(&["rep", "dim", "E8", "0,0,0,0,0,0,0,1", "--json"])["dim"], "248");
    let t = json_of(&["rep", "tensor", "A2", "1,0", "0,1", "--json"]);
    assert_eq!(t["terms"].as_array().unwrap().len(), 2);
    let k = json_of(&["kr", "restrict", "E6", "2", "1", "--json"]);
    assert_eq!(k["dim"], "79");
    assert_eq!(verlinde().args(["kr", "restrict", "E6", "9", "1"]).output().unwrap().status.code(), Some(2));
}

#[test]
fn cluster_commands() {
    let e = json_of(&["cluster", "enumerate", "D4", "1", "--json"]);
    assert_eq!((e["variables"].as_u64(), e["frozen"].as_u64()), (Some(20), Some(4)));
    let init = json_of(&["cluster", "init", "A3", "2", "--height", "-1,0,1", "--json"]);
    assert_eq!(init["vertices"].as_array().unwrap().len(), 9);
    assert_eq!(init["arrows"].as_array().unwrap().len(), 14);
    let dot = verlinde().args(["cluster", "export", "A3", "1", "--format", "dot"]).output().unwrap();
    assert_eq!(String::from_utf8(dot.stdout).unwrap().matches("shape=box").count(), 3);
    let txt = verlinde().args(["cluster", "export", "A3", "1", "--format", "txt"]).output().unwrap();
    let txt = String::from_utf8(txt.stdout).unwrap();
    assert!(txt.lines().all(|l| l.contains(" = ")));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    assert_eq!(succeeds(&["verify", "D4", "2", "--json", "--out", path.to_str().unwrap()]), "");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["counts"]["variables"], 20);
}

#[test]
fn examples_pass() {
    succeeds(&["examples", "all"]);
    assert!(succeeds(&["examples", "dn", "5"]).contains("consistent"));
    let v = json_of(&["examples", "a2", "--json"]);
    assert_eq!(v[0]["dimension"], 700);
}

/// A tampered data directory is refused, not silently used.
#[test]
fn tampered_table_fails() {
    let dir = tempfile::tempdir().unwrap();
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/cluster_table_E6.json");
    let text = std::fs::read_to_string(src).unwrap().replacen("\"V_1\"", "\"V_2\"", 1);
    std::fs::write(dir.path().join("cluster_table_E6.json"), text).unwrap();
    let out = verlinde().env("VERLINDE_DATA_DIR", dir.path()).args(["verify", "E6", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("checksum"));
}
