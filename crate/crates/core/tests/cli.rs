//! End-to-end CLI checks: exit codes, formats, sweep and selftest.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qweyl"))
}

fn tmpfile(name: &str, content: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, content).unwrap();
    p
}

#[test]
fn analyze_family_exit_0() {
    let out = bin()
        .args(["analyze", "--family", "wk4", "--theta", "4", "--N", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"type_name\": \"A2xA2\""));
    assert!(text.contains("\"hz_isoclass_upper_bound\": 36"));
}

#[test]
fn malformed_entry_exit_1() {
    let f = tmpfile("bad.brd", "braiding/v1\ntheta 1\nq 3/0\n");
    let out = bin().arg("analyze").arg(&f).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn centrality_violation_exit_3() {
    let f = tmpfile(
        "fail.brd",
        "braiding/v1\ntheta 2\nq 1/2 3/5\nq 3/5 1/2\n",
    );
    let out = bin().arg("analyze").arg(&f).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn not_arithmetic_exit_2() {
    let f = tmpfile(
        "notarith.brd",
        "braiding/v1\ntheta 2\nq 0/1 1/3\nq 0/1 1/2\n",
    );
    let out = bin().arg("analyze").arg(&f).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn likely_infinite_exit_2() {
    let f = tmpfile(
        "infinite.brd",
        "braiding/v1\ntheta 2\nq 1/5 1/7\nq 0/1 1/5\n",
    );
    let out = bin().arg("analyze").arg(&f).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn family_descriptor_file() {
    let f = tmpfile(
        "family.brd",
        "braiding/v1\nfamily super-a theta=2 k=1 N=5\nexp 1,2=0\n",
    );
    let out = bin()
        .arg("analyze")
        .arg(&f)
        .args(["--format", "text"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("g_q type: A1"));
}

#[test]
fn dot_output() {
    let out = bin()
        .args([
            "analyze", "--family", "cartan-a", "--theta", "2", "--N", "5", "--format", "dot",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph weyl_groupoid"));
}

#[test]
fn sweep_summary() {
    let out = bin()
        .args([
            "sweep", "--family", "cartan-a", "--theta", "1,2", "--N", "3,5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("cartan-a")).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.contains("\tok\t")));
    // empty range → empty summary
    let out = bin()
        .args(["sweep", "--family", "cartan-a", "--theta", "", "--N", ""])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with("cartan-a"))
            .count(),
        0
    );
}

#[test]
fn selftest_passes() {
    let out = bin().arg("selftest").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
