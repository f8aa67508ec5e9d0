//! Runs the compiled binary to pin down exit codes and stream separation.

use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_electoral-tariffs")).args(args).output().expect("binary runs")
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(&dir, "ok.toml", "polity = \"smd\"\nt_m = 2\nt_f = 0\n");
    let bad = write(&dir, "bad.toml", "polity = \"smd\"\nt_m = 2\nt_f = 3\n");
    let garbled = write(&dir, "garbled.toml", "polity = smd\n");

    let out = bin(&["solve", &ok]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("id,status,t_m,t_f"), "{stdout}");

    let out = bin(&["solve", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 < t_f < t_m"));

    let out = bin(&["solve", &garbled]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    assert_eq!(bin(&["verify", "--n", "0"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(bin(&[]).status.code(), Some(2));
}

#[test]
fn verify_summary_goes_to_stderr() {
    let out = bin(&["verify", "--seed", "7", "--n", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("1/1 hold"));
}

#[test]
fn stdout_matches_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json").display().to_string();
    let piped = bin(&["verify", "--n", "20", "--format", "json"]);
    let filed = bin(&["verify", "--n", "20", "--format", "json", "--output", &path]);
    assert_eq!(filed.status.code(), Some(0));
    assert!(filed.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), piped.stdout);
}
