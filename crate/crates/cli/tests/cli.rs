use std::io::Write;
use std::process::{Command, Output, Stdio};

use ncrad_core::linsolve::same_ideal;
use ncrad_core::report::{read_poly, read_unipoly};
use ncrad_core::{parse_poly, NCPoly, UniPoly};
use serde_json::Value;
use tempfile::NamedTempFile;

const WORKED_EXAMPLE: &str = "# the worked example\n(x1* x1 + x2 x3 x3* x2*)* (x1* x1 + x2 x3 x3* x2*) + x4* x4\n";

fn file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn ncrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncrad")).args(args).output().unwrap()
}

fn run(args: &[&str], input: &NamedTempFile) -> Output {
    let mut all: Vec<&str> = args.to_vec();
    all.push(input.path().to_str().unwrap());
    ncrad(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn polys(v: &Value) -> Vec<NCPoly> {
    v.as_array().unwrap().iter().map(|p| read_poly(p).unwrap()).collect()
}

#[test]
fn worked_example_text() {
    let f = file(WORKED_EXAMPLE);
    let o = run(&["realrad"], &f);
    assert_eq!(o.status.code(), Some(0));
    let out: Vec<NCPoly> = stdout(&o).lines().map(|l| parse_poly(l).unwrap()).collect();
    let expect: Vec<NCPoly> = ["x1", "x3* x2*", "x4"].iter().map(|s| parse_poly(s).unwrap()).collect();
    assert!(same_ideal(&out, &expect).unwrap());
}

#[test]
fn worked_example_json_is_deterministic_and_reads_back() {
    let f = file(WORKED_EXAMPLE);
    let a = run(&["--format", "json", "--trace", "realrad"], &f);
    let b = run(&["realrad", "--trace", "--format=json"], &f);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc = json(&a);
    let expect: Vec<NCPoly> = ["x1", "x3* x2*", "x4"].iter().map(|s| parse_poly(s).unwrap()).collect();
    assert!(same_ideal(&polys(&doc["generators"]), &expect).unwrap());
    assert!(same_ideal(&polys(&doc["minimal_generators"]), &expect).unwrap());
    let rounds = doc["trace"].as_array().unwrap();
    assert_eq!(rounds.len(), doc["rounds"].as_u64().unwrap() as usize);
    assert_eq!(rounds.last().unwrap()["certificate"]["kind"], "infeasible");
}

#[test]
fn already_real_ideal_is_echoed() {
    let o = run(&["realrad"], &file("x1\n"));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x1\n");
}

#[test]
fn empty_file_is_a_usage_error() {
    let o = run(&["realrad"], &file("# nothing here\n\n"));
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn parse_errors_point_at_the_line() {
    let o = run(&["realrad"], &file("x1\nx2 +* 3\n"));
    assert_eq!(o.status.code(), Some(65));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains(":2:"), "{err}");
}

#[test]
fn bad_flags_are_usage_errors() {
    let f = file("x1\n");
    assert_eq!(run(&["--bogus", "realrad"], &f).status.code(), Some(64));
    assert_eq!(run(&["--tol", "-1", "realrad"], &f).status.code(), Some(64));
    assert_eq!(run(&["--vars", "0", "realrad"], &f).status.code(), Some(64));
    assert_eq!(ncrad(&["realrad"]).status.code(), Some(64));
    assert_eq!(ncrad(&["--help"]).status.code(), Some(0));
}

#[test]
fn vars_flag_bounds_the_input() {
    let f = file("x3\n");
    assert_eq!(run(&["--vars", "2", "realrad"], &f).status.code(), Some(64));
    let o = run(&["--vars", "4", "--format", "json", "realrad"], &f);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["g"], 4);
}

#[test]
fn membership() {
    let f = file("x2\n");
    assert_eq!(run(&["member", "--poly", "x1 x2"], &f).status.code(), Some(0));
    let o = run(&["member", "--poly", "x2 x1 + 1", "--format", "json"], &f);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["member"], false);
}

#[test]
fn alpha_answers() {
    let f = file("x1* x1\n");
    assert_eq!(run(&["alpha", "--poly", "x1"], &f).status.code(), Some(0));
    let o = run(&["alpha", "--poly", "x1 x1", "--format", "json"], &f);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["answer"], "no");
}

#[test]
fn realness() {
    assert_eq!(run(&["isreal"], &file("x1* x1\n")).status.code(), Some(1));
    assert_eq!(run(&["isreal"], &file("x2\n")).status.code(), Some(0));
    assert_eq!(run(&["beta"], &file("x1* x1\n")).status.code(), Some(0));
}

#[test]
fn evaluation_and_compression() {
    let ideal = file("x1 - 2\nx1* x1 - 4\n");
    let point = file("X1 = [2, 1; 0, 3]\nv = [1; 0]\n");
    let o = ncrad(&[
        "eval",
        ideal.path().to_str().unwrap(),
        "--point",
        point.path().to_str().unwrap(),
        "--compress",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let doc = json(&o);
    assert_eq!(doc["values"][0], serde_json::json!(["0/1", "0/1"]));
    assert_eq!(doc["vanishes"], false);
    assert_eq!(doc["compressed"]["agrees"], true);
}

#[test]
fn standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ncrad"))
        .args(["realrad", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"x1* x1\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x1\n");
}

#[test]
fn smith_form_json_is_exact() {
    let o = run(&["matpoly", "--format", "json", "smith"], &file("[x, 1; 0, x]\n"));
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    let diag: Vec<UniPoly> = doc["diagonal"].as_array().unwrap().iter().map(|p| read_unipoly(p).unwrap()).collect();
    let x = UniPoly::x();
    assert_eq!(diag, vec![UniPoly::one(), &x * &x]);
}

#[test]
fn matrix_real_radical() {
    let f = file("[x^2, 0; 0, x^2 + 1]\n");
    let o = run(&["matpoly", "realrad"], &f);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[x, 0; 0, 1]\n");
    assert_eq!(run(&["matpoly", "member", "--matrix", "[x, 0; 0, 1]"], &f).status.code(), Some(0));
    assert_eq!(run(&["matpoly", "member", "--matrix", "[1, 0; 0, 0]"], &f).status.code(), Some(1));
    let g = file("[x, 1; 0, x]\n");
    assert_eq!(run(&["matpoly", "member", "--matrix", "[x, 1; 0, x]"], &g).status.code(), Some(0));
}
