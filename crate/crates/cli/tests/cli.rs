use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

const WORKED: &str = "lett[0] (ax (p*q)) (appr (lett[0] (pair (ax p) (ax q)) \
                      (lamr (pair (ax p) (pair (ax q) (ax r))))) (ax r))";

fn lnbe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lnbe")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(dir: &TempDir, name: &str, body: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn worked_example_normalizes() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "ex.lam", &format!("# three hypotheses\n{}\n", WORKED));
    let o = lnbe(&["nbe", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "lett[0] (ax (p*q)) (pair (sw (ax p)) (pair (sw (ax q)) (sw (ax r))))\n"
    );
    let o = lnbe(&["check", &f]);
    assert_eq!(stdout(&o), "p*q, r |- p*(q*r)\n");
}

#[test]
fn a_term_is_related_to_itself_by_the_empty_trace() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "t.lam", WORKED);
    let o = lnbe(&["equiv", &f, &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
}

#[test]
fn equiv_exit_codes() {
    let dir = TempDir::new().unwrap();
    let redex = file(&dir, "a.lam", "appr (lamr (ax p)) (ax p)");
    let id = file(&dir, "b.lam", "ax p");
    let o = lnbe(&["equiv", &redex, &id]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), ":BetaOver:LR\n");
    assert_eq!(lnbe(&["equiv", &redex, &id, "--steps", "0"]).status.code(), Some(2));
    let other = file(&dir, "c.lam", "ax q");
    assert_eq!(lnbe(&["equiv", &redex, &other]).status.code(), Some(1));
}

#[test]
fn ill_formed_input_is_reported() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "bad.lam", "pair (ax p) (appr (ax p) (ax q))");
    let o = lnbe(&["check", &f]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("path 1"), "{}", err);
    assert_eq!(lnbe(&["nbe", &f]).status.code(), Some(1));
    assert_eq!(lnbe(&["nbe", "/nonexistent/file.lam"]).status.code(), Some(1));
}

#[test]
fn generation_is_stable() {
    for calculus in ["lambek", "mill", "dill"] {
        let a = lnbe(&["gen", "--seed", "7", "--size", "20", "--calculus", calculus]);
        let b = lnbe(&["--calculus", calculus, "gen", "--seed", "7", "--size", "20"]);
        assert_eq!(a.status.code(), Some(0));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn generated_terms_check() {
    let dir = TempDir::new().unwrap();
    for calculus in ["lambek", "mill", "dill"] {
        let g = lnbe(&["gen", "--seed", "11", "--calculus", calculus]);
        let f = file(&dir, &format!("{}.txt", calculus), &stdout(&g));
        assert_eq!(lnbe(&["--calculus", calculus, "check", &f]).status.code(), Some(0));
        assert_eq!(lnbe(&["--calculus", calculus, "nbe", &f]).status.code(), Some(0));
    }
}

#[test]
fn mill_session() {
    let dir = TempDir::new().unwrap();
    let t = file(&dir, "t.ml", "app (lam x. (pair (ax x:p) (ax y:q))) (ax z:p)");
    let o = lnbe(&["--calculus", "mill", "check", &t]);
    assert_eq!(stdout(&o), "y:q, z:p |- p*q\n");
    let o = lnbe(&["--calculus", "mill", "nbe", &t]);
    assert_eq!(stdout(&o), "pair (sw (ax z:p)) (sw (ax y:q))\n");
    let o = lnbe(&["--calculus", "mill", "step", &t, "--apply", ":BetaLolli:LR"]);
    assert_eq!(stdout(&o), "pair (ax z:p) (ax y:q)\n");
    let u = file(&dir, "u.ml", "pair (ax z:p) (ax y:q)");
    let o = lnbe(&["--calculus", "mill", "equiv", &t, &u]);
    assert_eq!(o.status.code(), Some(0));
    let bang = file(&dir, "b.ml", "ax y:!p");
    assert_eq!(lnbe(&["--calculus", "mill", "check", &bang]).status.code(), Some(1));
}

#[test]
fn dill_session() {
    let dir = TempDir::new().unwrap();
    let t = file(&dir, "t.dl", "ax y:!p");
    assert_eq!(stdout(&lnbe(&["--calculus", "dill", "check", &t])), "; y:!p |- !p\n");
    assert_eq!(
        stdout(&lnbe(&["--calculus", "dill", "nbe", &t])),
        "letb[x0] (ax y:!p) (bang (sw (axint x0:p)))\n"
    );
    let steps = stdout(&lnbe(&["--calculus", "dill", "step", &t, "--list"]));
    assert!(steps.lines().any(|l| l == ":EtaBang:RL"), "{}", steps);
    let u = file(&dir, "u.dl", "letb[u] (ax y:!p) (pair (axint u:p) (axint u:p))");
    assert_eq!(
        stdout(&lnbe(&["--calculus", "dill", "check", &u])),
        "; y:!p |- p*p\n"
    );
}
