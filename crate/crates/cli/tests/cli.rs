//! Drives the `zoll` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn zoll(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zoll")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn ratio_at_zoll_reports_equality() {
    let o = zoll(&["ratio", "--p", "2", "--eps", "0", "--generator", "hopf_height"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("zoll_equality"));
}

#[test]
fn amplitude_above_cap_exits_two() {
    let o = zoll(&["ratio", "--eps", "-0.3", "--generator", "hopf_tilt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("out_of_regime"));
}

#[test]
fn sweep_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = zoll(&["sweep", "--generator", "hopf_tilt", "--eps", "0,0.02", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("records.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(out.join("summary.json").is_file());
    assert!(Path::new(&out.join("grids/section_eps_p0.020000.csv")).is_file());
}

#[test]
fn bad_config_fails_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"lens_order\": 1,\n  \"sead\": 3\n}\n").unwrap();
    let o = zoll(&["ratio", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn profile_that_does_not_descend_is_refused() {
    let o = zoll(&["ratio", "--p", "2", "--generator", "mixed", "--eps", "0.01"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_generator_is_refused() {
    let o = zoll(&["ratio", "--generator", "twist"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown generator"));
}
