//! Exit-code and output smoke tests for the binary.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_contactpoly"))
}

#[test]
fn svp_named_lattice_succeeds() {
    let out = bin().args(["svp", "--lattice", "an 2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("6 shortest vectors"));
    assert!(text.contains("min norm^2 = 2"));
}

#[test]
fn unknown_lattice_is_an_input_error() {
    let out = bin().args(["svp", "--lattice", "nope 7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn delone_needs_the_leech_convention() {
    let out = bin()
        .args(["delone", "--lattice", "an 2", "--seed-row", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_is_deterministic_across_workers() {
    let run = |workers: &str, dir: &str| {
        let out = bin()
            .args([
                "classify",
                "--lattice",
                "dn 4",
                "--workers",
                workers,
                "--out",
                dir,
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        std::fs::read_to_string(format!("{dir}/report.txt")).unwrap()
    };
    let tmp = std::env::temp_dir();
    let a = run("1", tmp.join("cp-w1").to_str().unwrap());
    let b = run("3", tmp.join("cp-w3").to_str().unwrap());
    assert_eq!(a, b);
    assert!(!a.trim().is_empty());
}

#[test]
fn group_file_must_act_on_the_lattice() {
    // a rotation by an irrational-looking rational matrix is not orthogonal
    let dir = std::env::temp_dir().join("cp-badgroup");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.txt");
    std::fs::write(&path, "G 2 1\n1 1\n0 1\n").unwrap();
    let out = bin()
        .args(["group-order", "--lattice", "zn 2", "--group", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
