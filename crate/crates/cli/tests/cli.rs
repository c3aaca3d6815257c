use serde_json::Value;
use std::process::{Command, Output};

fn holocheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holocheck"))
        .args(args)
        .env_remove("HOLOCHECK_SUITES")
        .env_remove("HOLOCHECK_C")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn suite_filter_runs_only_the_selected_suite() {
    let out = holocheck(&["verify", "--suites", "pairings", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let records = v["records"].as_array().unwrap();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| r["suite"] == "pairings"));
    for r in records {
        for key in ["check", "status", "dims", "certificate", "paper_ref"] {
            assert!(r.get(key).is_some(), "{key}");
        }
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(holocheck(&["verify", "--suites", "nope"]).status.code(), Some(2));
    assert_eq!(holocheck(&["verify", "--c", "1/0x"]).status.code(), Some(2));
    assert_eq!(holocheck(&["verify", "--mode", "g13"]).status.code(), Some(2));
    assert_eq!(holocheck(&["decompose", "V(1,"]).status.code(), Some(2));
    assert_eq!(holocheck(&["transvect", "x1", "x1", "3", "0"]).status.code(), Some(2));
    assert_eq!(holocheck(&["constants", "--point", "/nonexistent/point.json"]).status.code(), Some(2));
    assert_eq!(holocheck(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn env_overrides_flags() {
    let out = Command::new(env!("CARGO_BIN_EXE_holocheck"))
        .args(["verify"])
        .env("HOLOCHECK_SUITES", "torsion")
        .env("HOLOCHECK_SEED", "11")
        .env("HOLOCHECK_FORMAT", "json")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["seed"], 11);
    assert_eq!(v["suites"], serde_json::json!(["torsion"]));
}

#[test]
fn closure_mode_flag_restricts_modes() {
    let v = json(&holocheck(&["verify", "--suites", "closure", "--mode", "g12"]));
    let checks: Vec<&str> = v["records"].as_array().unwrap().iter().map(|r| r["check"].as_str().unwrap()).collect();
    assert_eq!(checks, ["d_squared_g12", "curvature_ansatz_control"]);
}

#[test]
fn transvect_and_decompose_outputs() {
    let out = holocheck(&["--format", "text", "transvect", "x1^0*x2^2", "y2^2", "0", "2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2\nbidegree (0,0)\n");
    let v = json(&holocheck(&["decompose", "V(1,2)*V(3,4)"]));
    let weights: Vec<Value> = v["summands"].as_array().unwrap().iter().map(|s| s["weight"].clone()).collect();
    assert_eq!(weights.len(), 6);
    assert_eq!(v["dim"], 6 * 20);
    let v = json(&holocheck(&["decompose", "T(x1*y1, x1*y1; 2, 0)"]));
    assert_eq!(v["bidegree"], serde_json::json!([0, 0]));
}

#[test]
fn point_file_constants_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let point = dir.path().join("flat.json");
    std::fs::write(&point, r#"{"c":{"vars":[],"terms":[{"coeff":"5","exps":[]}]}}"#).unwrap();
    let report = dir.path().join("out.json");
    let out = holocheck(&["constants", "--point", point.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!((v["c"].as_str(), v["c1"].as_str(), v["c2"].as_str()), (Some("5"), Some("0"), Some("0")));
    assert_eq!(v["restriction_admissible"], true);

    std::fs::write(&point, "{not json").unwrap();
    assert_eq!(holocheck(&["constants", "--point", point.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn rank_jmatrix_and_integrals_commands() {
    let v = json(&holocheck(&["rank", "--seed", "4", "--c", "-3/2"]));
    assert_eq!(v["certified"]["rank"], 10);
    assert_eq!(v["c"], "-3/2");
    let out = holocheck(&["jmatrix", "--c", "2", "--emit", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["entries"].as_array().unwrap().len(), 12);
    assert_eq!(v["cols"].as_array().unwrap().len(), 12);
    let out = holocheck(&["integrals", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["check"]["nonzero_entries"], serde_json::json!([0, 0]));
}

#[test]
fn text_report_and_workers() {
    let one = holocheck(&["verify", "--suites", "bianchi,torsion", "--workers", "1"]);
    let four = holocheck(&["verify", "--suites", "torsion,bianchi", "--workers", "4"]);
    let strip = |o: &Output| {
        let mut v = json(o);
        for r in v["records"].as_array_mut().unwrap() {
            r.as_object_mut().unwrap().remove("wall_time_ms");
        }
        v
    };
    assert_eq!(strip(&one), strip(&four));
    let text = String::from_utf8(holocheck(&["--format", "text", "verify", "--suites", "torsion"]).stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS") || l.starts_with("seed")));
}
