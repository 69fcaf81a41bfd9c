//! End-to-end tests of the installed binary: exit codes, certificate
//! artifacts, reproducibility, and the JSON mirror.

use std::path::Path;
use std::process::{Command, Output};

fn brauer(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brauer"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.display().to_string()
}

const SYSTEM: &str = "field GF(3)\npoly 3 2: [1] 0,0,2; [1] 0,2,0; [1] 2,0,0\n";

#[test]
fn solve_succeeds_and_writes_a_verifiable_certificate() {
    let tmp = tempfile::tempdir().unwrap();
    let sys = write(tmp.path(), "sys.txt", SYSTEM);
    let out = brauer(tmp.path(), &["solve", &sys, "--out", "cert.txt"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout, "point: ([1], [1], [1])\n");
    let verify = brauer(tmp.path(), &["verify", "cert.txt"]);
    assert_eq!(verify.status.code(), Some(0), "{verify:?}");
    let report = String::from_utf8(verify.stdout).unwrap();
    assert!(report.contains("certificate ok"), "{report}");
}

#[test]
fn parse_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write(tmp.path(), "bad.txt", "field GF(6)\n");
    let out = brauer(tmp.path(), &["solve", &bad]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let missing = brauer(tmp.path(), &["solve", "no-such-file.txt"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let sys = write(tmp.path(), "sys.txt", SYSTEM);
    let out = brauer(tmp.path(), &["solve", &sys, "--budget-tries", "0"]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn tampered_certificate_exits_4_and_names_the_check() {
    let tmp = tempfile::tempdir().unwrap();
    let sys = write(tmp.path(), "sys.txt", SYSTEM);
    let out = brauer(tmp.path(), &["solve", &sys, "--out", "cert.txt"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = std::fs::read_to_string(tmp.path().join("cert.txt")).unwrap();
    let tampered = cert.replace("([1], [1], [1])", "([1], [1], [2])");
    assert_ne!(cert, tampered);
    write(tmp.path(), "tampered.txt", &tampered);
    let verify = brauer(tmp.path(), &["verify", "tampered.txt"]);
    assert_eq!(verify.status.code(), Some(4), "{verify:?}");
    let err = String::from_utf8(verify.stderr).unwrap();
    assert!(err.contains("digest"), "failure must name the check: {err}");
}

#[test]
fn identical_job_and_seed_reproduce_the_certificate() {
    let tmp = tempfile::tempdir().unwrap();
    let job = write(
        tmp.path(),
        "job.txt",
        "brauer-job v1\ncommand: solve\nfield: GF(3)\nform: poly 3 2: [1] 0,0,2; [1] 0,2,0; [1] 2,0,0\nseed: 9\noutput: cert-a.txt\n",
    );
    assert_eq!(brauer(tmp.path(), &["run", &job]).status.code(), Some(0));
    let a = std::fs::read(tmp.path().join("cert-a.txt")).unwrap();
    let job2 = write(
        tmp.path(),
        "job2.txt",
        "brauer-job v1\ncommand: solve\nfield: GF(3)\nform: poly 3 2: [1] 0,0,2; [1] 0,2,0; [1] 2,0,0\nseed: 9\noutput: cert-b.txt\n",
    );
    assert_eq!(brauer(tmp.path(), &["run", &job2]).status.code(), Some(0));
    let b = std::fs::read(tmp.path().join("cert-b.txt")).unwrap();
    assert_eq!(a, b, "certificates must be byte-identical");
}

#[test]
fn nkd_prints_the_bound() {
    let tmp = tempfile::tempdir().unwrap();
    let out = brauer(tmp.path(), &["nkd", "GF(3)", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2\n");
}

#[test]
fn json_mirror_carries_the_report() {
    let tmp = tempfile::tempdir().unwrap();
    let out = brauer(tmp.path(), &["nkd", "GF(3)", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.trim(), r#"{"status":"ok","report":["2"],"certificate":null}"#);
    let err = brauer(tmp.path(), &["solve", "no-such-file.txt", "--json"]);
    assert_eq!(err.status.code(), Some(2));
    let stdout = String::from_utf8(err.stdout).unwrap();
    assert!(stdout.contains(r#""status":"error""#), "{stdout}");
    assert!(stdout.contains(r#""code":2"#), "{stdout}");
}

#[test]
fn enumerate_lists_the_locus() {
    let tmp = tempfile::tempdir().unwrap();
    let sys = write(tmp.path(), "sys.txt", "field GF(2)\npoly 2 1: [1] 1,0\n");
    let out = brauer(tmp.path(), &["enumerate", &sys]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("points: 2\n"), "{stdout}");
}

#[test]
fn budget_env_default_is_honored() {
    let tmp = tempfile::tempdir().unwrap();
    let sys = write(tmp.path(), "sys.txt", SYSTEM);
    let out = Command::new(env!("CARGO_BIN_EXE_brauer"))
        .current_dir(tmp.path())
        .env("BRAUER_BUDGET_DEFAULT", "0")
        .args(["solve", &sys])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}
