//! Golden scenarios for the command-line front end: exit-code contract and
//! the trace file format.

use std::path::{Path, PathBuf};
use std::process::Command;

use finbase::amalgamation::{amalgamate, AmalgamationRequest};
use finbase::doc::{ConditionDoc, TraceDoc};
use finbase::fixtures::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_finbase"))
}

fn write_condition(dir: &Path, name: &str, cond: &finbase::Condition) -> PathBuf {
    let path = dir.join(name);
    let text = serde_json::to_string_pretty(&ConditionDoc::from(cond)).unwrap();
    std::fs::write(&path, text).unwrap();
    path
}

fn exit_code(cmd: &mut Command) -> i32 {
    cmd.output().unwrap().status.code().unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let t = write_condition(dir.path(), "t.json", &fix_t());
    let bad = write_condition(dir.path(), "bad.json", &fix_bad());
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{\"A\": [0]}").unwrap();

    assert_eq!(exit_code(bin().arg("validate").arg(&t)), 0);
    assert_eq!(exit_code(bin().arg("validate").arg(&bad)), 1);
    assert_eq!(exit_code(bin().arg("validate").arg(&bad).arg("--strict")), 0);
    assert_eq!(exit_code(bin().arg("validate").arg(&garbage)), 2);
    assert_eq!(exit_code(bin().arg("validate").arg(dir.path().join("absent.json"))), 2);
}

#[test]
fn leq_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let t = write_condition(dir.path(), "t.json", &fix_t());
    let q = write_condition(dir.path(), "q.json", &fix_q());
    let bad = write_condition(dir.path(), "bad.json", &fix_bad());

    assert_eq!(exit_code(bin().arg("leq").arg(&q).arg(&t)), 0);
    assert_eq!(exit_code(bin().arg("leq").arg(&t).arg(&q)), 1);
    assert_eq!(exit_code(bin().arg("leq").arg(&bad).arg(&t)), 2);
}

#[test]
fn twins_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p0 = write_condition(dir.path(), "p0.json", &fix_pair_p0());
    let p1 = write_condition(dir.path(), "p1.json", &fix_pair_p1());
    let q = write_condition(dir.path(), "q.json", &fix_q());

    assert_eq!(exit_code(bin().arg("twins").arg(&p0).arg(&p1)), 0);
    assert_eq!(exit_code(bin().arg("twins").arg(&p0).arg(&q)), 1);
}

#[test]
fn amalgamate_golden_trace_file() {
    let dir = tempfile::tempdir().unwrap();
    let p0 = write_condition(dir.path(), "p0.json", &fix_pair_p0());
    let p1 = write_condition(dir.path(), "p1.json", &fix_pair_p1());
    let out = dir.path().join("out.json");

    let code = exit_code(
        bin()
            .arg("amalgamate")
            .arg(&p0)
            .arg(&p1)
            .args(["--xi0", "0", "--k", "0", "--m", "1"])
            .arg("--trace")
            .arg(&out),
    );
    assert_eq!(code, 0);

    let doc: TraceDoc = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let written = doc.to_trace().unwrap();
    let req = AmalgamationRequest::new(fix_pair_p0(), fix_pair_p1(), 0, 0, 1).unwrap();
    assert_eq!(written, amalgamate(&req).unwrap());
    assert_eq!(written.p, fix_amalg());

    // xi0 not private to the first side: input error.
    let code = exit_code(
        bin()
            .arg("amalgamate")
            .arg(&p0)
            .arg(&p1)
            .args(["--xi0", "1", "--k", "0", "--m", "1"]),
    );
    assert_eq!(code, 2);
}

#[test]
fn fuzz_exit_codes() {
    assert_eq!(
        exit_code(bin().args([
            "fuzz", "--trials", "5", "--seed", "1", "--property", "amalgamation-full"
        ])),
        0
    );
    assert_eq!(
        exit_code(bin().args([
            "fuzz", "--trials", "30", "--seed", "1", "--property", "amalgamation-full",
            "--mutation", "drop-star-membership"
        ])),
        1
    );
    assert_eq!(
        exit_code(bin().args(["fuzz", "--trials", "5", "--seed", "1", "--property", "nope"])),
        2
    );
    // --seed is mandatory for randomized commands.
    assert_eq!(
        exit_code(bin().args(["fuzz", "--trials", "5", "--property", "amalgamation-full"])),
        2
    );
}

#[test]
fn simulate_writes_limit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("limit.json");
    let code = exit_code(
        bin()
            .args(["simulate", "--points", "4", "--depth", "2", "--seed", "3", "--out"])
            .arg(&out),
    );
    assert_eq!(code, 0);
    let doc: finbase::doc::LimitDoc =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.points, vec![0, 1, 2, 3]);
    assert_eq!(doc.depth, 2);
    assert!(!doc.chain.is_empty());

    assert_eq!(exit_code(bin().args(["simulate", "--points", "0", "--depth", "2", "--seed", "3"])), 2);
}

#[test]
fn irreducible_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let chain = dir.path().join("chain.json");
    std::fs::write(&chain, r#"{"points": [0, 1], "generators": [[0]]}"#).unwrap();
    let indiscrete = dir.path().join("indiscrete.json");
    std::fs::write(&indiscrete, r#"{"points": [0, 1], "generators": []}"#).unwrap();

    assert_eq!(exit_code(bin().arg("irreducible").arg(&chain)), 0);
    assert_eq!(exit_code(bin().arg("irreducible").arg(&indiscrete)), 1);
    assert_eq!(exit_code(bin().arg("irreducible").arg(dir.path().join("nope.json"))), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(exit_code(bin().arg("frobnicate")), 2);
    assert_eq!(exit_code(&mut bin()), 2);
}

#[test]
fn json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let t = write_condition(dir.path(), "t.json", &fix_t());
    let output = bin()
        .args(["--format", "json", "validate"])
        .arg(&t)
        .output()
        .unwrap();
    let value: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(value["valid"], serde_json::Value::Bool(true));
}
