use std::path::PathBuf;
use std::process::{Command, Output};

use bvh_core::report::{emit_report, execute_command, Command as Cmd, Format, Report, RunConfig, SCHEMA};
use serde_json::Value;

fn bvh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bvh")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_cyclic_four_exits_zero() {
    let out = bvh(&["verify", "--group", "cyclic:4", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("schema: bvh/1"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn dihedral_gamma_image() {
    let out = bvh(&[
        "delta", "--group", "dihedral:8", "--p", "2", "--element", "gamma", "--max-degree", "2", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema"], SCHEMA);
    let mats = v["body"]["deltas"][0]["matrices"].as_array().unwrap();
    assert_eq!(mats.len(), 2);
    assert_eq!(mats[0]["rank"], 0);
    let m2 = &mats[1];
    assert_eq!(m2["degree"], 2);
    assert_eq!(m2["rank"], 1);
    // H^1 basis is dual to (g, h), so the hom with value 1 on both is g* + h*
    assert_eq!(m2["target_basis"], serde_json::json!(["g*", "h*"]));
    assert_eq!(m2["image"], serde_json::json!(["g* + h*"]));
}

#[test]
fn quaternion_lie_verdict() {
    let out = bvh(&["hh1-lie", "--group", "quaternion:8", "--p", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let a = &v["body"]["analysis"];
    assert_eq!(a["dim"], 7);
    assert_eq!(a["soluble"], true);
    assert_eq!(a["derived_length"], 2);
}

#[test]
fn errors_exit_two() {
    for args in [
        vec!["info", "--group", "nonsense:4"],
        vec!["cohomology", "--group", "semidihedral:16", "--max-degree", "4"],
        vec!["cohomology", "--group", "cyclic:4", "--max-degree", "6"],
        vec!["delta", "--group", "dihedral:8", "--element", "zz"],
        vec!["cohomology", "--group", "symmetric:3"],
    ] {
        let out = bvh(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn heavy_flag_lifts_budget() {
    let args = ["cohomology", "--group", "cyclic:8", "--max-degree", "3", "--format", "json"];
    let run = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_bvh"))
            .args(args)
            .args(extra)
            .env("BVH_WORK_BUDGET", "1000")
            .output()
            .unwrap()
    };
    assert_eq!(run(&[]).status.code(), Some(2));
    let out = run(&["--heavy"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["body"]["dims"], serde_json::json!([1, 1, 1, 1]));
}

#[test]
fn same_seed_same_bytes() {
    let args = ["extension-delta", "--group", "cyclic:4", "--seed", "11", "--format", "json"];
    let a = bvh(&args);
    let b = bvh(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = bvh(&["extension-delta", "--group", "cyclic:4", "--seed", "12", "--format", "json"]);
    assert_eq!(c.status.code(), Some(0));
}

#[test]
fn empty_report_is_valid_json() {
    let text = emit_report(&Report::empty(), Format::Json);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["checks"], serde_json::json!([]));
    assert_eq!(Report::from_json(&text).unwrap(), Report::empty());
}

#[test]
fn delta_report_round_trips() {
    let cfg = RunConfig::new(Cmd::Delta, "quaternion:8");
    let r = execute_command(&cfg).unwrap();
    let text = emit_report(&r, Format::Json);
    assert_eq!(Report::from_json(&text).unwrap(), r);
    assert!(Report::from_json(&text.replace("bvh/1", "bvh/0")).is_err());
}

#[test]
fn every_command_emits_text() {
    for cmd in Cmd::ALL {
        let r = execute_command(&RunConfig::new(cmd, "elementary:2:2")).unwrap();
        assert!(r.passed(), "{cmd:?}");
        let text = emit_report(&r, Format::Text);
        assert!(text.starts_with("schema: bvh/1\n"));
        assert!(text.contains(cmd.name()));
    }
}

#[test]
fn golden_delta_dihedral() {
    let out = bvh(&["delta", "--group", "dihedral:8", "--p", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/delta_dihedral8.json");
    if std::env::var_os("BLESS").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let golden = std::fs::read(&path).expect("golden file present; run with BLESS=1 to create it");
    assert_eq!(String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&golden));
}
