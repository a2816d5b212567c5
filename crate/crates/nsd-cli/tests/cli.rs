//! Black-box runs of the `nsd` binary: output shapes, exit codes, and
//! determinism across the subcommands.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn nsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn wheel_text(rim: usize) -> String {
    let mut lines = vec![format!("{} {}", rim + 1, 2 * rim)];
    for i in 1..=rim {
        lines.push(format!("0 {i}"));
        lines.push(format!("{i} {}", if i == rim { 1 } else { i + 1 }));
    }
    lines.join("\n")
}

#[test]
fn chi_sum_reports_value_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p4 = write(dir.path(), "p4.txt", "4 3\n0 1\n1 2\n2 3\n");
    let out = nsd(&["chi-sum", p4.to_str().unwrap()]);
    assert!(out.status.success());
    let body = stdout(&out);
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("3"));
    assert_eq!(lines.clone().count(), 3);
    assert!(lines.all(|l| l.split_whitespace().count() == 3));
}

#[test]
fn chi_sum_exhaustion_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = write(dir.path(), "c5.txt", "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n");
    let out = nsd(&["chi-sum", c5.to_str().unwrap(), "--node-limit", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("at least"));
}

#[test]
fn malformed_file_is_exit_1_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "3 2\n0 1\n0 x\n");
    let out = nsd(&["chi-sum", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("bad.txt"), "{err}");
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn detect_names_a_configuration_on_p5() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write(dir.path(), "p5.txt", "5 4\n0 1\n1 2\n2 3\n3 4\n");
    let out = nsd(&["detect", p5.to_str().unwrap(), "--k", "28"]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert!(body.lines().any(|l| l.starts_with("C")), "{body}");
    assert!(!body.contains("configurations: 0"));
}

#[test]
fn detect_rejects_an_isolated_edge() {
    let dir = tempfile::tempdir().unwrap();
    let k2 = write(dir.path(), "k2.txt", "2 1\n0 1\n");
    let out = nsd(&["detect", k2.to_str().unwrap(), "--k", "28"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("isolated edge"));
}

#[test]
fn discharge_conserves_and_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "k4.txt", "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    let rot = write(
        dir.path(),
        "k4.rot",
        "0: 1 2 3\n1: 0 3 2\n2: 0 1 3\n3: 0 2 1\n",
    );
    let out = nsd(&[
        "discharge",
        graph.to_str().unwrap(),
        rot.to_str().unwrap(),
        "--keep-all",
    ]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert!(body.contains("total(before)=-12 total(after)=-12"), "{body}");
    assert!(!body.contains("\nX "), "unexpected transfers: {body}");
    assert!(body.contains("balance: FAIL (4 violations)"), "{body}");
}

#[test]
fn discharge_pays_the_trash_rule_on_a_star() {
    let dir = tempfile::tempdir().unwrap();
    let mut edges = vec!["9 8".to_string()];
    let mut rot0 = vec!["0:".to_string()];
    let mut rots = Vec::new();
    for i in 1..=8 {
        edges.push(format!("0 {i}"));
        rot0.push(i.to_string());
        rots.push(format!("{i}: 0"));
    }
    let graph = write(dir.path(), "star8.txt", &(edges.join("\n") + "\n"));
    let rot = write(
        dir.path(),
        "star8.rot",
        &(rot0.join(" ") + "\n" + &rots.join("\n") + "\n"),
    );
    let out = nsd(&["discharge", graph.to_str().unwrap(), rot.to_str().unwrap()]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert_eq!(body.matches(" RT").count(), 8, "{body}");
    assert!(body.contains("V0 final=-6 floor=0 VIOLATION"), "{body}");
    assert!(body.contains("total(before)=-38 total(after)=-38"), "{body}");
}

#[test]
fn construct_output_passes_verify() {
    let dir = tempfile::tempdir().unwrap();
    let w30 = write(dir.path(), "w30.txt", &wheel_text(30));
    let out = nsd(&["construct", w30.to_str().unwrap(), "--k", "30", "--trace"]);
    assert!(out.status.success());
    let body = stdout(&out);
    let colouring: Vec<&str> = body.lines().filter(|l| !l.starts_with("step ")).collect();
    assert_eq!(colouring.len(), 60);
    assert!(body.lines().any(|l| l.starts_with("step ")));

    let col = write(dir.path(), "w30.col", &(colouring.join("\n") + "\n"));
    let check = nsd(&["verify", w30.to_str().unwrap(), col.to_str().unwrap()]);
    assert!(check.status.success());
    assert_eq!(stdout(&check).trim(), "proper: yes, nsd: yes");
}

#[test]
fn verify_answers_yes_on_k3() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(dir.path(), "k3.txt", "3 3\n0 1\n0 2\n1 2\n");
    let col = write(dir.path(), "k3.col", "0 1 1\n0 2 2\n1 2 3\n");
    let out = nsd(&["verify", k3.to_str().unwrap(), col.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "proper: yes, nsd: yes");
}

#[test]
fn gen_is_deterministic_and_detectable() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("g");
    let out = nsd(&["gen", "--n", "40", "--seed", "7", "--out", base.to_str().unwrap()]);
    assert!(out.status.success());
    let graph = base.with_extension("txt");
    let first = std::fs::read_to_string(&graph).unwrap();

    let again = nsd(&["gen", "--n", "40", "--seed", "7"]);
    assert!(again.status.success());
    assert_eq!(stdout(&again), first);

    let scan = nsd(&["detect", graph.to_str().unwrap()]);
    assert!(scan.status.success());
    assert!(!stdout(&scan).contains("configurations: 0"));
}

#[test]
fn sweep_prints_one_line_per_instance() {
    let out = nsd(&["sweep", "--count", "6", "--n-lo", "6", "--n-hi", "9", "--seed", "3"]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert_eq!(body.lines().filter(|l| l.starts_with("i=")).count(), 6);
    assert!(body.trim_end().ends_with("non-empty: 6/6"), "{body}");
}

#[test]
fn flags_must_be_positive() {
    let out = nsd(&["gen", "--n", "0"]);
    assert!(!out.status.success());
    let out = nsd(&["chi-sum", "x.txt", "--time-limit", "0"]);
    assert!(!out.status.success());
}
