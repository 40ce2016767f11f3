use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qcsa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcsa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn build_qfa_netlist() {
    let o = qcsa(&["build", "qfa"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("qubits 4\n"));
    let ccx = text.lines().filter(|l| l.starts_with("ccx ")).count();
    let cx = text.lines().filter(|l| l.starts_with("cx ")).count();
    assert_eq!((ccx, cx), (2, 2));
}

#[test]
fn build_ripple_width() {
    let o = qcsa(&["build", "ripple", "-n", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("qubits 13"));
}

#[test]
fn build_rejects_modulus_out_of_range() {
    let o = qcsa(&["build", "modcsa", "--bits", "4", "--modulus", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("modulus 5"));
}

#[test]
fn build_rejects_even_modulus_and_unknown_names() {
    assert_eq!(
        qcsa(&["build", "modmul", "--modulus", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(qcsa(&["build", "wallace"]).status.code(), Some(2));
    assert_eq!(qcsa(&["build"]).status.code(), Some(2));
}

#[test]
fn build_is_deterministic_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("tree.net");
    let p = path.to_str().unwrap();
    assert!(
        qcsa(&["build", "tree", "--inputs", "5", "-L", "3", "-o", p])
            .status
            .success()
    );
    let first = fs::read_to_string(&path).unwrap();
    let again = stdout(&qcsa(&["build", "tree", "--inputs", "5", "-L", "3"]));
    assert_eq!(first, again);
    let parsed = qcsa::netlist::parse(&first).unwrap();
    assert_eq!(qcsa::netlist::emit(&parsed), first);
}

#[test]
fn simulate_ripple() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("ripple.net");
    let p = path.to_str().unwrap();
    assert!(qcsa(&["build", "ripple", "-n", "4", "-o", p])
        .status
        .success());
    let o = qcsa(&["simulate", p, "--set", "A=3", "--set", "B=5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "B=8"), "{out}");
    assert!(out.lines().any(|l| l == "CO=0"), "{out}");
    assert!(out.lines().any(|l| l == "A=3"), "{out}");
    assert!(out.contains("ancillas clean"));
}

#[test]
fn simulate_all_zero() {
    let o = qcsa(&[
        "simulate", "csa32", "-n", "3", "--set", "A=0", "--set", "B=0", "--set", "C=0",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    for line in out.lines().filter(|l| l.contains('=')) {
        assert!(line.ends_with("=0"), "{line}");
    }
    assert!(out.contains("ancillas clean"));
}

#[test]
fn simulate_reports_missing_register_and_bad_lines() {
    let o = qcsa(&["simulate", "ripple", "-n", "2", "--set", "A=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`B`"));

    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.net");
    fs::write(&path, "qubits 3\ncx 0 1\nccx 0 0 2\n").unwrap();
    let o = qcsa(&["simulate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn verify_examples() {
    let o = qcsa(&["verify", "qfa"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("pass (16 cases)"));

    let o = qcsa(&["verify", "csa32", "-n", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("pass (4096 cases)"));

    let o = qcsa(&[
        "verify",
        "modexp",
        "--bits",
        "4",
        "--modulus",
        "3",
        "--base",
        "2",
        "--expwidth",
        "2",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("pass (4 cases)"));
}

#[test]
fn verify_modcsa_reports_probe() {
    let o = qcsa(&["verify", "modcsa", "--bits", "4", "--modulus", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("both set in 0 of 4096 cases"));
}

#[test]
fn verify_sampled_uses_seed() {
    let a = qcsa(&["verify", "tree", "--inputs", "8", "-L", "4", "--seed", "11"]);
    assert!(a.status.success());
    assert!(stdout(&a).contains("pass (10000 cases) [sampled, seed 11]"));
}

#[test]
fn truthtable_qha() {
    let o = qcsa(&["truthtable", "qha"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 8);
}

#[test]
fn export_examples() {
    let o = qcsa(&["export", "qfa"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), qcsa::qasm::HEADER_LINES + 4);

    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.net");
    fs::write(&empty, "qubits 0\n").unwrap();
    let o = qcsa(&["export", empty.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), qcsa::qasm::HEADER_LINES);

    let (c, _) = qcsa::adders::build_ripple_adder(2).unwrap();
    let out = dir.path().join("ripple.qasm");
    assert!(
        qcsa(&["export", "ripple", "-n", "2", "-o", out.to_str().unwrap()])
            .status
            .success()
    );
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(
        text.lines().count() - qcsa::qasm::HEADER_LINES,
        c.gate_counts().total()
    );
    assert_eq!(qcsa::qasm::import(&text).unwrap().gates(), c.gates());
}

#[test]
fn resources_report_formats() {
    let o = qcsa(&[
        "resources",
        "tree",
        "--inputs",
        "8",
        "-L",
        "4",
        "--format",
        "kv",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("formula.tree_qubits.formula=56\n"));
    assert!(out.contains("formula.tree_qubits.measured=56\n"));
    assert!(out.contains("formula.tree_qubits.relation=equal\n"));

    let o = qcsa(&["resources", "csmul", "-n", "2"]);
    let out = stdout(&o);
    assert!(out.contains("mul_adder_qubits"));
    assert!(out
        .lines()
        .any(|l| l.starts_with("mul_total_qubits") && l.contains(" 32 ")));
}

#[test]
fn resources_scaling() {
    let o = qcsa(&["resources", "--scaling", "2,10,1000"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let last = out
        .lines()
        .find(|l| l.trim_start().starts_with("1000 "))
        .unwrap();
    assert!(last.contains(" 100000 "), "{last}");
    assert!(last.trim_end().ends_with(" 1000"), "{last}");
    assert_eq!(
        qcsa(&["resources", "--scaling", "1"]).status.code(),
        Some(2)
    );
}
