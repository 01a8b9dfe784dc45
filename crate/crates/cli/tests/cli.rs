use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const SORT: &str = "{x, y / x - y > 0 => [y, x]; x => [x]}";

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn topocheck(args: &[&str], file: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topocheck")).args(args).arg(file).env_remove("TOPOCHECK_FUEL").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn typecheck_sort_both_dialects() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "sort.mgs", SORT);
    let o = topocheck(&["typecheck", "--strong"], &f);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "forall t. [t] int -> [t] int");
    let o = topocheck(&["typecheck", "--soft"], &f);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("forall"), "{}", stdout(&o));
}

#[test]
fn type_errors_exit_one() {
    let d = TempDir::new().unwrap();
    let o = topocheck(&["typecheck", "--strong"], &write(&d, "bad.mgs", "1 + true"));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("type error"));
}

#[test]
fn run_exit_codes() {
    let d = TempDir::new().unwrap();
    let sort = write(&d, "sort.mgs", SORT);
    let o = topocheck(&["run", "--fix", "--input", "[3, 1, 2]"], &sort);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "[1, 2, 3]"));
    assert_eq!(topocheck(&["run"], &write(&d, "w.mgs", "1 + true")).status.code(), Some(1));
    let grid = write(&d, "g.mgs", "{x => [x, x]} (1 :: empty_grid)");
    assert_eq!(topocheck(&["run"], &grid).status.code(), Some(2));
    let lp = write(&d, "loop.mgs", "(fun f -> f f) (fun f -> f f)");
    assert_eq!(topocheck(&["run", "--fuel", "50"], &lp).status.code(), Some(3));
}

#[test]
fn fuel_from_environment() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "dup.mgs", "{x => [x, x]}");
    let o = Command::new(env!("CARGO_BIN_EXE_topocheck"))
        .args(["run", "--fix", "--input", "[1]"])
        .arg(&f)
        .env("TOPOCHECK_FUEL", "500")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn input_errors_exit_four() {
    let d = TempDir::new().unwrap();
    assert_eq!(topocheck(&["typecheck", "--soft"], &d.path().join("missing.mgs")).status.code(), Some(4));
    assert_eq!(topocheck(&["typecheck", "--soft"], &write(&d, "s.mgs", "{x => [x")).status.code(), Some(4));
    assert_eq!(topocheck(&["solve"], &write(&d, "s.json", "{")).status.code(), Some(4));
}

#[test]
fn usage_errors_exit_64() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "a.mgs", "1");
    assert_eq!(topocheck(&["typecheck"], &f).status.code(), Some(64));
    assert_eq!(topocheck(&["typecheck", "--strong", "--soft"], &f).status.code(), Some(64));
}

#[test]
fn solve_verdicts() {
    let d = TempDir::new().unwrap();
    let ok = topocheck(&["solve", "--json"], &write(&d, "ok.json", r#"{"constraints":["int <= a"]}"#));
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["verdict"], "solvable");
    assert_eq!(v["least"]["a"]["name"], "int");
    let bad = topocheck(&["solve"], &write(&d, "bad.json", r#"["int <= a", "a <= bool"]"#));
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn constraints_feed_solve() {
    let d = TempDir::new().unwrap();
    let o = topocheck(&["constraints", "--json"], &write(&d, "id.mgs", "{x => [x]}"));
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["constraints"].as_array().is_some_and(|cs| !cs.is_empty()));
    let sys = write(&d, "sys.json", &String::from_utf8_lossy(&o.stdout));
    assert_eq!(topocheck(&["solve"], &sys).status.code(), Some(0));
}

#[test]
fn parse_emits_json() {
    let d = TempDir::new().unwrap();
    let o = topocheck(&["parse"], &write(&d, "sort.mgs", SORT));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "trans");
    assert_eq!(v["rules"].as_array().unwrap().len(), 2);
}

#[test]
fn optimize_drops_useless_test() {
    let d = TempDir::new().unwrap();
    let o = topocheck(&["optimize", "--content-type", "int"], &write(&d, "o.mgs", "{x:int => [x]; y => [y]}"));
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains(":int"), "{}", stdout(&o));
}
