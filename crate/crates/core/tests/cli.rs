//! The command-line front end: exit codes, error JSON and report files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_highercx"))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("highercx-cli-{}-{}", std::process::id(), name));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn error_kind(o: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("error JSON on stdout");
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn bad_configuration_exits_with_two() {
    let d = scratch("cfg");
    let o = run(&["--degree", "9", "mesh", "--out", d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_kind(&o), "config");

    let f = d.join("bad.cfg");
    std::fs::write(&f, "schema_version = 1\nresolution = 14\ncolour = blue\n").unwrap();
    let o = run(&["--config", f.to_str().unwrap(), "mesh"]);
    assert_eq!(o.status.code(), Some(2));

    std::fs::write(&f, "resolution = 14\n").unwrap();
    assert_eq!(run(&["--config", f.to_str().unwrap(), "mesh"]).status.code(), Some(2));

    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn module_errors_exit_with_one() {
    let d = scratch("basis1");
    let o = run(&["--out", d.to_str().unwrap(), "basis", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_kind(&o), "invalid");
}

#[test]
fn mesh_reports_are_byte_identical() {
    let (a, b) = (scratch("mesh-a"), scratch("mesh-b"));
    for d in [&a, &b] {
        let o = run(&["--out", d.to_str().unwrap(), "mesh"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let x = std::fs::read(a.join("mesh.json")).unwrap();
    assert_eq!(x, std::fs::read(b.join("mesh.json")).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&x).unwrap();
    assert!(v["vertices"].as_array().unwrap().len() > 100);
}

#[test]
fn config_file_and_flags_combine() {
    let d = scratch("combine");
    let f = d.join("run.cfg");
    std::fs::write(&f, "# quick run\nschema_version = 1\nresolution = 10\nseed = 5\n").unwrap();
    let o = run(&["--config", f.to_str().unwrap(), "--resolution", "14", "--out", d.to_str().unwrap(), "basis", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("basis.json")).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "basis");
    assert_eq!(v["config"]["resolution"], 14);
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["result"]["dim"], 3);
    let csv = std::fs::read_to_string(d.join("basis.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("index,singular_value"));
}

#[test]
fn zero_differential_holonomy_is_fuchsian() {
    let d = scratch("hol");
    let o = run(&["--out", d.to_str().unwrap(), "holonomy", "--zero"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("Fuchsian: yes"));
    let csv = std::fs::read_to_string(d.join("traces.csv")).unwrap();
    assert_eq!(csv.lines().count(), 17);
}
