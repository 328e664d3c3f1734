//! Runs the `tiltkit` binary on the shipped fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tiltkit::context::Context;
use tiltkit::duality::ringel_dual;
use tiltkit::text::Document;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn tiltkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tiltkit")).args(args).output().expect("binary runs")
}

fn report(file: &str, command: &str, extra: &[&str]) -> (i32, Value) {
    let path = fixture(file);
    let mut args = vec!["--input", path.to_str().unwrap(), "--command", command];
    args.extend_from_slice(extra);
    let out = tiltkit(&args);
    let v: Value = serde_json::from_slice(&out.stdout).expect("json report");
    (out.status.code().unwrap(), v)
}

#[test]
fn classify_exit_codes() {
    let (code, r) = report("commuting_loops.alg", "classify", &[]);
    assert_eq!((code, r["summary"].as_str().unwrap()), (0, "balanced at N"));
    let (code, r) = report("arrow_loop.alg", "classify", &[]);
    assert_eq!((code, r["summary"].as_str().unwrap()), (1, "stratified; not weakly adapted (violated within N)"));
    assert_eq!(r["status"], "violated");
    assert_eq!(r["schema_version"], 1);
}

#[test]
fn stratify_loop_arrow_is_violated() {
    let (code, r) = report("loop_arrow.alg", "stratify", &["--truncate", "5"]);
    assert_eq!(code, 1);
    assert!(r["summary"].as_str().unwrap().starts_with("violated within N"));
    assert_eq!(r["input"]["truncation"], 5);
}

#[test]
fn parse_errors_exit_3_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.alg");
    std::fs::write(&bad, "vertex 1\narrow a 1 1\narrow a 1 1\n").unwrap();
    let out = tiltkit(&["--input", bad.to_str().unwrap(), "--command", "validate"]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["result"]["error"].as_str().unwrap().starts_with("line 3:"), "{v}");
    let missing = tiltkit(&["--input", "/nonexistent/file.alg", "--command", "validate"]);
    assert_eq!(missing.status.code(), Some(3));
    let field = tiltkit(&["--input", fixture("kx.alg").to_str().unwrap(), "--command", "validate", "--field", "GF:4"]);
    assert_eq!(field.status.code(), Some(3));
}

#[test]
fn reports_are_deterministic() {
    let a = tiltkit(&["--input", fixture("commuting_loops.alg").to_str().unwrap(), "--command", "simples-as-tilting"]);
    let b = tiltkit(&["--input", fixture("commuting_loops.alg").to_str().unwrap(), "--command", "simples-as-tilting"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_file_and_summary_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    let o = tiltkit(&[
        "--input",
        fixture("kx.alg").to_str().unwrap(),
        "--command",
        "koszul",
        "--field",
        "GF:3",
        "--format",
        "summary",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("koszul dual with 1 arrow and 1 relation"));
    assert!(text.contains("field GF(3)\n"));
}

#[test]
fn ringel_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = report("commuting_loops.alg", "ringel", &[]);
    assert_eq!(code, 0);
    let text = r["result"]["presentation_text"].as_str().unwrap();
    let path = dir.path().join("ringel.alg");
    std::fs::write(&path, text).unwrap();
    let out = tiltkit(&["--input", path.to_str().unwrap(), "--command", "ringel"]);
    assert_eq!(out.status.code(), Some(0));
    let again: Value = serde_json::from_slice(&out.stdout).unwrap();
    let top = again["result"]["reliable_degree"].as_u64().unwrap() as usize;
    let doc = Document::parse(&std::fs::read_to_string(fixture("commuting_loops.alg")).unwrap()).unwrap();
    let ctx = Context::new(&doc.presentation(None, None).unwrap(), doc.order(), 6).unwrap();
    for d in 0..=top {
        assert_eq!(again["result"]["cartan"][d], serde_json::json!(ctx.alg.cartan(d)), "degree {d}");
    }
    // The library route agrees with the binary.
    let lib = ringel_dual(&ctx).unwrap();
    assert_eq!(serde_json::json!(lib.cartan), r["result"]["cartan"]);
}

#[test]
fn every_command_runs_on_every_fixture() {
    for f in ["loop_arrow.alg", "arrow_loop.alg", "commuting_loops.alg", "kx.alg"] {
        for c in ["validate", "stratify", "standard-modules", "tilting", "classify", "ringel", "koszul", "commute", "simples-as-tilting"] {
            let (code, r) = report(f, c, &["--truncate", "6"]);
            assert!(code <= 2, "{f} {c}: exit {code}");
            assert_eq!(r["exit_code"], code, "{f} {c}");
            assert_eq!(r["command"], c);
        }
    }
}
