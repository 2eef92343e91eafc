use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn okb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_okb")).args(args).output().expect("run okb")
}

fn okb_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_okb")).current_dir(dir).args(args).output().expect("run okb")
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn validate_builtin_passes() {
    let o = okb(&["validate", "tangent-p2"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).trim_end().ends_with("PASS"));
}

#[test]
fn three_lines_in_a_cone_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut p: Value = serde_json::from_slice(&okb(&["example", "pn-sum", "3"]).stdout).unwrap();
    p["bundle"]["filtrations"] = serde_json::json!([
        {"a": 0, "jump": {"b": 1, "line": [1, 0]}},
        {"a": 0, "jump": {"b": 1, "line": [0, 1]}},
        {"a": 0, "jump": {"b": 1, "line": [1, 1]}},
        {"a": 0}
    ]);
    std::fs::write(dir.path().join("bad.json"), p.to_string()).unwrap();
    let o = okb_in(dir.path(), &["validate", "bad.json"]);
    assert_eq!(code(&o), 2);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("FAIL cone 1 carries 3 distinct jump lines"), "{text}");
    assert_eq!(code(&okb_in(dir.path(), &["body", "bad.json", "--class", "0,0;1"])), 2);
}

#[test]
fn malformed_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let full = okb(&["example", "tangent-p2"]).stdout;
    std::fs::write(dir.path().join("cut.json"), &full[..full.len() / 2]).unwrap();
    let o = okb_in(dir.path(), &["validate", "cut.json"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    assert_eq!(code(&okb(&["example", "nope"])), 1);
    assert_eq!(code(&okb(&["body", "tangent-p2", "--class", "0;x"])), 1);
    assert_eq!(code(&okb(&["body", "tangent-p2", "--class", "0,0;1"])), 1);
    assert_eq!(code(&okb(&["no-such-command"])), 1);
    assert_eq!(code(&okb(&["body", "tangent-p2"])), 1);
}

#[test]
fn tangent_cone_rows() {
    let v = json(&okb(&["cone", "tangent-p2"]));
    let rows = v["cone"]["inequalities"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(v["cone"]["coords"], serde_json::json!(["x1", "x2", "x3", "w3", "w"]));
    assert_eq!(v["cone"]["provenance"], serde_json::json!(["B{1}", "C{2}", "C{3}", "C{2,3}", "w>=x", "x>=0"]));
    assert_eq!(v["context"]["u1"], serde_json::json!([1, 0]));
}

#[test]
fn split_cone_has_no_c_rows() {
    for name in [["split-p1", "0", "0"], ["split-p1", "1", "-1"]] {
        let v = json(&okb(&["cone", &name.join(" ")]));
        for p in v["cone"]["provenance"].as_array().unwrap() {
            assert!(!p.as_str().unwrap().starts_with('C'), "{p}");
        }
    }
}

#[test]
fn cap_exceeded_exits_three() {
    let o = okb(&["cone", "tangent-p2", "--cap", "2"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("count 3"));
    assert!(o.stdout.is_empty());
}

#[test]
fn tangent_body_volume_and_check() {
    let v = json(&okb(&["body", "tangent-p2", "--class", "0;1", "--volume", "--check"]));
    let b = &v["bodies"][0];
    assert_eq!(b["volume"], "1");
    assert_eq!(b["vol_class"], "6");
    assert_eq!(b["checks"]["h0"], 8);
    assert_eq!(b["checks"]["valuations"], 8);
    assert_eq!(b["checks"]["level_c_equality"], true);
    assert_eq!(b["checks"]["passed"], true);
}

#[test]
fn split_check_runs_the_model() {
    for class in ["0;0", "1;2", "3;4", "-2;3"] {
        let v = json(&okb(&["body", "split-p1 1 -1", "--class", class, "--check"]));
        assert_eq!(v["bodies"][0]["checks"]["split_model"], true, "{class}");
    }
}

#[test]
fn negative_twist_check_is_rejected() {
    assert_eq!(code(&okb(&["body", "tangent-p2", "--class", "0;-1", "--check"])), 1);
}

#[test]
fn examples_round_trip_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["tangent-p2", "split-p1 0 0", "split-p1 0 -1", "hirzebruch 1", "pn-sum 2", "pn-sum 3"] {
        let o = okb(&["example", name]);
        assert_eq!(code(&o), 0);
        std::fs::write(dir.path().join("p.json"), &o.stdout).unwrap();
        assert_eq!(code(&okb_in(dir.path(), &["validate", "p.json"])), 0, "{name}");
    }
}

#[test]
fn file_classes_in_input_order_are_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let mut p: Value = serde_json::from_slice(&okb(&["example", "tangent-p2"]).stdout).unwrap();
    // D_1 + D_3 is linearly equivalent to 2 D_3
    p["classes"] = serde_json::json!([{"coeffs": [1, 0, 1], "twist": 1}, {"coeffs": [2], "twist": 1}]);
    std::fs::write(dir.path().join("p.json"), p.to_string()).unwrap();
    let v = json(&okb_in(dir.path(), &["h0", "p.json"]));
    let s = v["sections"].as_array().unwrap();
    assert_eq!(s[0], s[1]);
}

#[test]
fn output_is_byte_deterministic() {
    let args = ["body", "hirzebruch 1", "--class", "1;1", "--class", "2;1", "--vertices", "--volume", "--lattice"];
    let runs: Vec<Vec<u8>> = ["1", "3"]
        .iter()
        .map(|t| {
            let o = Command::new(env!("CARGO_BIN_EXE_okb")).env("OKB_THREADS", t).args(args).output().unwrap();
            assert!(o.status.success());
            o.stdout
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn out_and_off_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = okb_in(
        dir.path(),
        &["body", "tangent-p2", "--class", "0;1", "--class", "0;2", "--out", "r.json", "--off", "b.off"],
    );
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["bodies"].as_array().unwrap().len(), 2);
    for k in [1, 2] {
        let off = std::fs::read_to_string(dir.path().join(format!("b-{k}.off"))).unwrap();
        assert!(off.starts_with("OFF\n7 6 0\n"), "{off}");
    }
}

#[test]
fn h0_and_valuations_agree() {
    let h = json(&okb(&["h0", "tangent-p2", "--class", "0;2"]));
    let v = json(&okb(&["valuations", "tangent-p2", "--class", "0;2"]));
    assert_eq!(h["sections"][0]["h0"], 27);
    assert_eq!(v["valuations"][0]["count"], 27);
}
