use std::process::{Command, Output};

use emzv::doc::{from_json, DecompositionDoc};
use emzv::EPoly;

fn emzv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emzv")).args(args).env_remove("EMZV_MZV_TABLE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn decompose_text() {
    let o = emzv(&["decompose", "--index", "3,0"]);
    assert!(o.status.success());
    let line = stdout(&o);
    let (lhs, rhs) = line.trim().split_once(" = ").unwrap();
    assert_eq!(lhs, "I(3,0)");
    assert_eq!(EPoly::parse(rhs).unwrap(), EPoly::parse("-pi*e(4) - 1/240*pi*e(0)").unwrap());
}

#[test]
fn decompose_json_round_trip() {
    let o = emzv(&["decompose", "--index", "0,1,0,0", "--format", "json"]);
    assert!(o.status.success());
    let d: DecompositionDoc = from_json(&stdout(&o)).unwrap();
    let d = d.to_decomposition().unwrap();
    assert_eq!(d.epoly, EPoly::parse("-3*pi*z3 + 6*pi*e(0,0,4) + 1/40*pi*e(0,0,0)").unwrap());
}

#[test]
fn table_overflow_exit_code() {
    let o = emzv(&["decompose", "--index", "5,5,5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("TableOverflow"));
}

#[test]
fn malformed_input_is_usage_error() {
    assert_eq!(emzv(&["decompose", "--index", "1,x"]).status.code(), Some(2));
    assert_eq!(emzv(&["derlie-relations", "--weight", "14", "--depth", "2", "--candidate", "[e10"]).status.code(), Some(2));
}

#[test]
fn derlie_relation_weight_14() {
    let o = emzv(&["derlie-relations", "--weight", "14", "--depth", "2", "--candidate", "[e10,e4]", "--candidate", "[e8,e6]"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "(1, -3)"), "{}", stdout(&o));
}

#[test]
fn membership_of_a_non_relation() {
    let ok = emzv(&["membership", "--epoly", "e(10,4) + e(4,10)"]);
    assert!(ok.status.success(), "{}", stdout(&ok));
    let bad = emzv(&["membership", "--epoly", "e(10,4)"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("NOT in dual image"));
}

#[test]
fn verify_single_check() {
    let o = emzv(&["verify", "--only", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("PASS"));
    assert_eq!(emzv(&["verify", "--only", "nope"]).status.code(), Some(1));
}
