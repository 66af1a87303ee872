//! End-to-end checks of the command-line surface: output text and exit
//! codes, run against the shipped fixtures plus a couple of throwaway
//! automata written to a scratch directory.

use std::path::{Path, PathBuf};
use std::process::Command;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dfta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn scratch_file(name: &str, contents: &str) -> String {
    let path = scratch_dir().join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

/// Runs the binary and returns (exit code, stdout, stderr).
fn dfta(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dfta"))
        .args(args)
        .output()
        .expect("binary spawns");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn run_reports_the_state_and_the_verdict() {
    let (code, out, _) = dfta(&["run", "--automaton", &fixture("a1.fta"),
        "--term", &fixture("t1.term"), "--assign", "x1=0,x2=1,x3=0"]);
    assert_eq!((code, out.trim()), (0, "q1 accepted"));

    let (code, out, _) = dfta(&["run", "--automaton", &fixture("a1.fta"),
        "--term", &fixture("t1.term"), "--assign", "x1=0,x2=0,x3=0"]);
    assert_eq!(code, 1);
    assert_eq!(out.trim(), "q0 rejected");
}

#[test]
fn ess_writes_the_full_report() {
    let (code, out, _) = dfta(&["ess", "--automaton", &fixture("a2.fta"),
        "--term", &fixture("t2.term")]);
    assert_eq!(code, 0);
    assert!(out.contains("x1: essential, r-essential,"));
    assert!(out.contains("x2: essential, r-essential,"));
    assert!(out.contains(
        "x3: essential, not r-essential, witness γ1={x1=2,x2=2,x3=0} γ2={x1=2,x2=2,x3=1} states q1/q2"
    ));

    let (code, out, _) = dfta(&["ess", "--automaton", &fixture("a2.fta"),
        "--term", &fixture("t2.term"), "--mode", "rA"]);
    assert_eq!(code, 0);
    assert!(out.contains("x3: not r-essential"));
    assert!(out.contains("x1: r-essential,"));
}

#[test]
fn chain_prints_root_to_leaf_or_objects() {
    let (code, out, _) = dfta(&["chain", "--automaton", &fixture("a1.fta"),
        "--term", &fixture("t1.term"), "--var", "x1"]);
    assert_eq!((code, out.trim()), (0, "ε -> 2 -> 21"));

    let (code, out, _) = dfta(&["chain", "--automaton", &fixture("a1.fta"),
        "--term", &fixture("t1.term"), "--var", "3"]);
    assert_eq!(code, 1);
    assert_eq!(out.trim(), "x3 is not essential");
}

#[test]
fn reduce_prints_the_result_and_its_trace() {
    let (code, out, _) = dfta(&["reduce", "--automaton", &fixture("a1.fta"),
        "--term", &fixture("t1.term")]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "g1(x2,x1)");
    assert!(lines[1].starts_with("RFI-subterm @1: "));
    assert!(lines[2].starts_with("RFI-subterm @2: "));

    let (code, out, _) = dfta(&["reduce", "--automaton", &fixture("a2.fta"),
        "--term", &fixture("t2.term"), "--mode", "rA"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "g2(f2(x1),f2(x2),1)");
    assert_eq!(lines.len(), 2);
}

#[test]
fn equiv_compares_two_terms() {
    let other = scratch_file("core.term", "g1(x2,x1)\n");
    let (code, out, _) = dfta(&["equiv", "--automaton", &fixture("a1.fta"),
        "--term", &fixture("t1.term"), "--term", &other]);
    assert_eq!((code, out.trim()), (0, "equivalent"));

    let lone = scratch_file("lone.term", "x1\n");
    let (code, out, _) = dfta(&["equiv", "--automaton", &fixture("a1.fta"),
        "--term", &fixture("t1.term"), "--term", &lone]);
    assert_eq!(code, 1);
    assert_eq!(out.trim(), "distinct under {x1=0,x2=1,x3=0}: q1 vs q0");

    let (code, _, err) = dfta(&["equiv", "--automaton", &fixture("a1.fta"),
        "--term", &fixture("t1.term")]);
    assert_eq!(code, 2, "one term is not enough: {err}");
}

#[test]
fn covered_reports_escapes() {
    let (code, out, _) = dfta(&["covered", "--automaton", &fixture("a1.fta"),
        "--term", &fixture("t1.term")]);
    assert_eq!((code, out.trim()), (0, "covered"));

    let flipper = scratch_file(
        "flipper.fta",
        "states: q0 q1\nfinal: q1\nconst 0 -> q0\nrule f(q0) -> q1\nrule f(q1) -> q0\n",
    );
    let escaping = scratch_file("escaping.term", "f(0)\n");
    let (code, out, _) = dfta(&["covered", "--automaton", &flipper, "--term", &escaping]);
    assert_eq!(code, 1);
    assert!(out.starts_with("not covered: "), "got: {out}");
    assert!(out.contains("q1"));
}

#[test]
fn finite_names_the_pump_cycle() {
    let (code, out, _) = dfta(&["finite", "--automaton", &fixture("a1.fta")]);
    assert_eq!(code, 1);
    assert_eq!(out.trim(), "infinite: q0 -> q1 -> q0 via f1, f1");

    let constants = scratch_file(
        "constants.fta",
        "states: q0 q1\nfinal: q1\nconst 0 -> q0\nconst 1 -> q1\n",
    );
    let (code, out, _) = dfta(&["finite", "--automaton", &constants]);
    assert_eq!((code, out.trim()), (0, "finite"));
}

#[test]
fn enumerate_lists_accepted_terms_in_order() {
    let (code, out, _) = dfta(&["enumerate", "--automaton", &fixture("a1.fta"),
        "--max-depth", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1\nf1(0)\ng1(0,1)\ng1(1,0)\ng1(1,1)\ng2(1,1)\n");
}

#[test]
fn minimize_writes_the_quotient_table() {
    let out_path = scratch_dir().join("a1-min.fta");
    let out_str = out_path.to_string_lossy().into_owned();
    let (code, out, _) = dfta(&["minimize", "--automaton", &fixture("a1.fta"),
        "--out", &out_str]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), format!("2 states, written to {out_str}"));
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert!(written.starts_with("states: "), "got: {written}");
}

#[test]
fn optimal_writes_a_pair_or_names_the_pump() {
    let prefix = scratch_dir().join("a1-opt");
    let (code, out, _) = dfta(&["optimal", "--automaton", &fixture("a1.fta"),
        "--out", &prefix.to_string_lossy()]);
    assert_eq!(code, 1);
    assert_eq!(out.trim(), "infinite: q0 -> q1 -> q0 via f1, f1");

    let constants = scratch_file(
        "constants-opt.fta",
        "states: q0 q1\nfinal: q1\nconst 0 -> q0\nconst 1 -> q1\n",
    );
    let prefix = scratch_dir().join("constants-opt");
    let (code, out, _) = dfta(&["optimal", "--automaton", &constants,
        "--out", &prefix.to_string_lossy()]);
    assert_eq!(code, 0, "stdout: {out}");
    let terms = std::fs::read_to_string(prefix.with_extension("terms")).unwrap();
    assert_eq!(terms, "1\n");
    let table = std::fs::read_to_string(prefix.with_extension("fta")).unwrap();
    assert!(table.starts_with("states: "));
}

#[test]
fn exhausted_budgets_use_their_own_exit_code() {
    let (code, _, err) = dfta(&["ess", "--automaton", &fixture("a2.fta"),
        "--term", &fixture("t2.term"), "--budget", "5"]);
    assert_eq!(code, 3);
    assert!(err.contains("search too large"), "got: {err}");
}

#[test]
fn usage_problems_exit_with_two() {
    let (code, _, err) = dfta(&["ess", "--automaton", &fixture("a1.fta"),
        "--term", "/nonexistent/t.term"]);
    assert_eq!(code, 2);
    assert!(err.contains("/nonexistent/t.term"));

    let (code, _, _) = dfta(&["run", "--automaton", &fixture("a1.fta"),
        "--term", &fixture("t1.term"), "--assign", "x1=0,x2=bogus,x3=0"]);
    assert_eq!(code, 2);

    // An assignment that misses a variable cannot drive a run.
    let (code, _, _) = dfta(&["run", "--automaton", &fixture("a1.fta"),
        "--term", &fixture("t1.term"), "--assign", "x1=0"]);
    assert_eq!(code, 2);

    let (code, _, _) = dfta(&["no-such-command"]);
    assert_eq!(code, 2);
}
