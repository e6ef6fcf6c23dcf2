//! The binary's exit codes, output files and error messages.

use std::path::PathBuf;
use std::process::{Command, Output};

fn alg(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "algebras", &format!("{name}.alg")].iter().collect()
}

fn gdefect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdefect")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gdefect-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn info_succeeds_and_writes_out_file() {
    let out = scratch("info.json");
    let r = gdefect(&["--out", out.to_str().unwrap(), "info", alg("a2").to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert!(r.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["input"]["file"], "a2.alg");
    assert_eq!(v["results"]["algebra"]["global_dim"]["verdict"], "finite:1");
}

#[test]
fn parse_errors_exit_one_with_position() {
    let bad = scratch("bad.alg");
    std::fs::write(&bad, "[quiver]\nvertices = 1\narrow x : 1 -> 9\n").unwrap();
    let r = gdefect(&["info", bad.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn missing_file_and_bad_idempotent_exit_one() {
    assert_eq!(gdefect(&["info", "/nonexistent/x.alg"]).status.code(), Some(1));
    let r = gdefect(&["schur", alg("a2").to_str().unwrap(), "--idempotent", "7"]);
    assert_eq!(r.status.code(), Some(1));
    let r = gdefect(&["gproj", alg("a2").to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1), "usage errors exit 1");
    assert_eq!(gdefect(&["--version"]).status.code(), Some(0));
}

#[test]
fn verify_accepts_reports_and_rejects_tampering() {
    let file = alg("hereditary_corner");
    let report = scratch("gproj.json");
    let r = gdefect(&[
        "--out",
        report.to_str().unwrap(),
        "gproj",
        file.to_str().unwrap(),
        "--corner",
        "B",
        "--simple",
        "3",
    ]);
    assert_eq!(r.status.code(), Some(0));
    let ok = gdefect(&["verify", file.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));

    let text = std::fs::read_to_string(&report).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["results"]["summary"]["gproj"]["certificate"]["dim"] = 5.into();
    std::fs::write(&report, serde_json::to_string(&v).unwrap()).unwrap();
    let bad = gdefect(&["verify", file.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    let out: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(out["results"]["verdict"], "fails");

    // the report does not belong to this input
    let other = gdefect(&["verify", alg("a2").to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_ne!(other.status.code(), Some(0));
}

#[test]
fn selftest_passes_and_catches_the_injected_fault() {
    let r = gdefect(&["selftest"]);
    assert_eq!(r.status.code(), Some(0));
    let r = gdefect(&["selftest", "--inject-fault", "cone-sign"]);
    assert_eq!(r.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["results"]["suites"]["cone"]["status"], "fail");
}
