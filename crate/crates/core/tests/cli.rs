use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn hybis(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hybis"));
    cmd.args(args).env_remove("HYBIS_MAX_PAIRS").env_remove("HYBIS_ORACLE_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hybis-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn emit(dir: &Path, fixture: &[&str]) -> PathBuf {
    let out = dir.join(fixture.join("_"));
    let mut args = vec!["fixtures", "emit"];
    args.extend_from_slice(fixture);
    args.extend(["--out", out.to_str().unwrap()]);
    assert!(hybis(&args, &[]).status.success());
    out
}

fn s(p: &Path, file: &str) -> String {
    p.join(file).to_str().unwrap().to_string()
}

#[test]
fn check_on_figure_one() {
    let dir = workdir("check");
    let fig1 = emit(&dir, &["fig1"]);
    let out = hybis(&["check", &s(&fig1, "right.json"), "n1", "'t"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "true");
    let out = hybis(&["check", &s(&fig1, "left.json"), "m2", "'t"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let out = hybis(&["check", &s(&fig1, "left.json"), "m0", "<>?z", "--assign", "z=m2"], &[]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn equivalence_on_figure_two() {
    let dir = workdir("equiv");
    let chain = emit(&dir, &["fig2_chain", "4"]);
    let cycle = emit(&dir, &["fig2_cycle"]);
    let (c, y) = (s(&chain, "model.json"), s(&cycle, "model.json"));
    let out = hybis(&["equiv", &c, "m0", &y, "n0", "--features", "down", "--l", "3"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("false\nseparator: "), "{text}");
    let out = hybis(&["equiv", &c, "m0", &y, "n0", "--l", "3"], &[]);
    assert_eq!(out.status.code(), Some(0));

    let out = hybis(&["--json", "oracle", "separate", &c, "m0", &y, "n0", "--features", "down", "--k", "1", "--l", "3"], &[]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["degree"], 3);
    let out = hybis(&["oracle", "compare", &c, "m0", &y, "n0", "--l", "3"], &[]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn guard_and_io_errors() {
    let dir = workdir("guard");
    let chain = emit(&dir, &["fig2_chain", "4"]);
    let c = s(&chain, "model.json");
    let out = hybis(&["bisim", "maximal", &c, &c, "--features", "down", "--k", "2", "--l", "2"], &[("HYBIS_MAX_PAIRS", "100")]);
    assert_eq!(out.status.code(), Some(3));
    let out = hybis(&["oracle", "compare", &c, "m0", &c, "m1", "--k", "2", "--cap", "10"], &[]);
    assert_eq!(out.status.code(), Some(3));
    let out = hybis(&["check", &s(&dir, "missing.json"), "w", "p"], &[]);
    assert_eq!(out.status.code(), Some(4));
    let out = hybis(&["check", &c, "m0", "<> ("], &[]);
    assert_eq!(out.status.code(), Some(2));
    let out = hybis(&["equiv", &c, "m0", &c, "m1", "--features", "box"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn translations() {
    let out = hybis(&["st", "<> p"], &[]);
    assert_eq!(stdout(&out).trim(), "exists sty . (R(stx,sty) & P(sty))");
    let out = hybis(&["sbt", "R(x,x)"], &[]);
    assert_eq!(stdout(&out).trim(), "exists x . (?x & @?x <>?x)");
    let out = hybis(&["sbt", "exists y . P(y)"], &[]);
    assert_eq!(out.status.code(), Some(2));
    let out = hybis(&["sbt", "exists y . P(y)", "--var", "stx"], &[]);
    assert_eq!(stdout(&out).trim(), "exists stx . (?stx & (exists y . @?y p))");
    let out = hybis(&["relativize", "exists x . P0(x)", "U"], &[]);
    assert_eq!(stdout(&out).trim(), "exists x . (U(x) & P0(x))");
    let out = hybis(&["psi-sigma", "forall y . y = y", "P(x)"], &[]);
    assert_eq!(stdout(&out).trim(), "P(x) | ((exists x . U(x)) -> forall y . (U(y) -> y = y))");
    let out = hybis(&["--json", "parse", "down x . <> ?x"], &[]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["sentence"], true);
    assert_eq!(v["features"], "down");
}

#[test]
fn families_round_trip_through_json() {
    let dir = workdir("families");
    let fig1 = emit(&dir, &["fig1"]);
    let (l, r, rel) = (s(&fig1, "left.json"), s(&fig1, "right.json"), s(&fig1, "relation.json"));
    assert_eq!(hybis(&["bisim", "verify", &l, &r, &rel], &[]).status.code(), Some(0));
    let out = hybis(&["bisim", "verify", &l, &r, &rel, "--features", "nom"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("t holds at n1 but not at m2"));

    let out = hybis(&["--json", "bisim", "maximal", &l, &r, "--features", "at,down,nom", "--l", "2"], &[]);
    let fam = dir.join("family.json");
    std::fs::write(&fam, &out.stdout).unwrap();
    let out = hybis(&["bisim", "verify", &l, &r, fam.to_str().unwrap(), "--features", "at,down,nom"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let un = emit(&dir, &["fig3_UN", "5"]);
    let (ul, ur, urel) = (s(&un, "left.json"), s(&un, "right.json"), s(&un, "relation.json"));
    assert_eq!(hybis(&["qinj", "verify", &ul, &ur, &urel, "--below", "5"], &[]).status.code(), Some(0));
    let out = hybis(&["--json", "qinj", "construct", &ul, &ur, &urel, "--k", "2", "--below", "5"], &[]);
    let omega = dir.join("omega.json");
    std::fs::write(&omega, &out.stdout).unwrap();
    let out = hybis(&["bisim", "verify", &ul, &ur, omega.to_str().unwrap(), "--features", "down", "--below", "4"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let mn = emit(&dir, &["fig3_MN", "5"]);
    let args = ["qinj", "verify", &s(&mn, "left.json"), &s(&mn, "right.json"), &s(&mn, "relation.json"), "--below", "5"].map(String::from);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(hybis(&args, &[]).status.code(), Some(1));
}

#[test]
fn axiomatise_members() {
    let dir = workdir("axiomatise");
    let chain = emit(&dir, &["fig2_chain", "3"]);
    let member = format!("{}:m0", s(&chain, "model.json"));
    let out = hybis(&["axiomatise", &member, "--features", "none", "--l", "2"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let phi = stdout(&out).trim().to_string();
    let out = hybis(&["check", &s(&chain, "model.json"), "m0", &phi], &[]);
    assert_eq!(stdout(&out).trim(), "true");
    let out = hybis(&["check", &s(&chain, "model.json"), "m1", &phi], &[]);
    assert_eq!(stdout(&out).trim(), "false");
}
