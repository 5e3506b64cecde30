use std::fs;
use std::process::Command;

use fracweyl::cli::run_args;
use fracweyl::sets::{q, IntervalUnion, Units};

fn write_set(dir: &tempfile::TempDir, name: &str, set: &IntervalUnion) -> String {
    let path = dir.path().join(name);
    fs::write(&path, serde_json::to_string(&set.to_json()).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(run_args(&["rootsys", "E9"]).0, 2);
    assert_eq!(run_args(&["--tol", "-1", "rootsys", "A2"]).0, 2);
    assert_eq!(run_args(&["--depth", "99", "basis", "example2", "--s", "0.3"]).0, 2);
    assert_eq!(run_args(&["surface", "example2", "--z", "1,2,3", "--s", "1.5"]).0, 2);
}

#[test]
fn verdicts_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let unit = write_set(&dir, "unit.json", &IntervalUnion::interval(q(0), q(2), Units::Pi));
    let shannon = write_set(&dir, "shannon.json", &fracweyl::wavelet::shannon_set());
    let (code, out) = run_args(&["waveletset", "verify", &unit]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "fail");
    assert_eq!(run_args(&["waveletset", "verify", &shannon]).0, 0);
    assert_eq!(run_args(&["tessellate", "A1"]).0, 0);
    assert_eq!(run_args(&["tessellate", "B2"]).0, 3);
}

#[test]
fn attractor_cap_is_reported_as_inconclusive() {
    assert_eq!(run_args(&["attractor", "sierpinski"]).0, 3);
    let (code, out) = run_args(&["--tol", "1e-3", "attractor", "sierpinski"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["residual"].as_f64().unwrap() <= 2.0 * v["certified_bound"].as_f64().unwrap() + v["dedup_slack"].as_f64().unwrap());
}

#[test]
fn surface_writes_a_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("s.obj");
    let out = Command::new(env!("CARGO_BIN_EXE_fracweyl"))
        .args(["--depth", "4", "surface", "example2", "--z", "1,0.5,-0.25", "--s", "0.3", "--out"])
        .arg(&obj)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let mesh = fs::read_to_string(&obj).unwrap();
    assert!(mesh.lines().any(|l| l.starts_with("v ")));
    assert!(mesh.lines().any(|l| l.starts_with("f ")));
}

#[test]
fn construct_writes_a_set_that_verifies_translation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let p = path.to_string_lossy().into_owned();
    assert_eq!(run_args(&["--out", &p, "waveletset", "construct", "--epsilon", "1e-2"]).0, 0);
    let json: fracweyl::sets::SetJson = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let set = IntervalUnion::from_json(&json).unwrap();
    let r = fracweyl::wavelet::verify_1d(&set, 64).unwrap();
    assert_eq!(r.translation_defect, 0.0);
    assert!(r.dilation_defect < 1e-2 * 2.0 * std::f64::consts::PI);
}
