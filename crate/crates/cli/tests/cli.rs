//! End-to-end runs of the binary: determinism, exit codes and the report
//! shapes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eqehrhart"))
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

#[test]
fn example_output_is_deterministic() {
    let a = run_ok(&["example", "hexagon-z6"]);
    let b = run_ok(&["example", "hexagon-z6"]);
    assert_eq!(a, b);
    assert!(a.contains("\"lattice_rank\": 2"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hex.json");
    let doc = run_ok(&["example", "hexagon-z6"]);
    std::fs::write(&path, doc).unwrap();
    let p = path.to_str().unwrap();
    for cmd in ["analyze", "hstar", "series"] {
        let a = run_ok(&[cmd, p, "--format", "json"]);
        let b = run_ok(&[cmd, p, "--format", "json"]);
        assert_eq!(a, b, "{cmd} output differs between runs");
    }
}

#[test]
fn check_exit_code_reflects_the_suite() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("square.json");
    let doc = run_ok(&["example", "bad-square-z2"]);
    std::fs::write(&path, doc).unwrap();
    let out = bin()
        .args(["check", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("all properties hold"), "{text}");
}

#[test]
fn parse_errors_exit_nonzero_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"lattice_rank\": 2").unwrap();
    let out = bin()
        .args(["analyze", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn csv_multiplicities_have_label_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cube.json");
    let doc = run_ok(&["example", "hypercube-sym-3"]);
    assert!(doc.contains("\"labels\""));
    std::fs::write(&path, doc).unwrap();
    let csv = run_ok(&["hstar", path.to_str().unwrap(), "--format", "csv"]);
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("degree,"), "{header}");
    assert!(header.contains("(2,1)") || header.contains("\"(2,1)\""), "{header}");
}

#[test]
fn thread_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hex.json");
    let doc = run_ok(&["example", "hexagon-z6"]);
    std::fs::write(&path, doc).unwrap();
    let out = bin()
        .args(["hstar", path.to_str().unwrap(), "--format", "json"])
        .env("EQEHRHART_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
}
