use std::process::Command;

use ns_state::channel::builtin_z0z1;

fn ns_state(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ns-state")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn theorem2_passes_every_check() {
    let (code, out, _) = ns_state(&["theorem2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("LP2 causal optimum = 13/16"));
    assert!(out.contains("classical CSIR optimum = 7/8"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn json_report_is_machine_readable() {
    let (code, out, _) = ns_state(&["--json", "toy"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["success"], "1");
    assert_eq!(v["passed"], true);
}

#[test]
fn usage_errors_go_to_stderr() {
    let (code, out, err) = ns_state(&["lp", "solve", "--form", "lp9"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(!err.is_empty());
}

#[test]
fn channel_files_drive_the_solver() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z0z1.toml");
    std::fs::write(&path, builtin_z0z1().to_file_string(None)).unwrap();
    let p = path.to_str().unwrap();
    let (code, out, _) = ns_state(&["lp", "solve", "--channel", p, "--M", "2", "--n", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("13/16"));
    let (code, out, _) = ns_state(&["classical", "--channel", p, "--M", "2", "--n", "2", "--csir"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("7/8"));
    let (code, _, err) = ns_state(&["classical", "--channel", "/nonexistent.toml", "--M", "2", "--n", "2"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
}
