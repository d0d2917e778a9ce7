use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use orepoly::serial::{from_json, lin_to_json, to_json, FieldFile, PolyFile};
use orepoly::{FieldCtx, LinPoly, SplitStats};
use serde::Deserialize;
use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_orepoly"));
    cmd.env_remove("TOOL_POLICY_MAX_Q");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    use std::io::Write;
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn gf16_file(dir: &Path) -> (FieldCtx, PathBuf) {
    let ctx = FieldCtx::new(2, 4, None).unwrap();
    let path = write(dir, "f.json", &to_json(&FieldFile::from_ctx(&ctx)));
    (ctx, path)
}

fn lin(ctx: &FieldCtx, idx: &[u32]) -> LinPoly {
    LinPoly::new(ctx, 1, idx.iter().map(|&i| ctx.elem(i)).collect()).unwrap()
}

#[derive(Deserialize)]
struct DecomposeOut {
    factors: Vec<PolyFile>,
}

#[test]
fn decompose_factors_compose_back() {
    let dir = TempDir::new().unwrap();
    let (ctx, field) = gf16_file(dir.path());
    let a = lin(&ctx, &[3, 1]);
    let b = lin(&ctx, &[5, 7, 1]);
    let c = lin(&ctx, &[2, 1]);
    let l = a.compose(&b).unwrap().compose(&c).unwrap();
    let poly = write(dir.path(), "L.json", &lin_to_json(&l));
    let out = stdout(&run(&["decompose", "--field", s(&field), "--poly", s(&poly), "--seed", "7"]));
    let parsed: DecomposeOut = from_json(&out).unwrap();
    assert!(parsed.factors.len() >= 3);
    let back = parsed
        .factors
        .iter()
        .map(|f| f.to_lin(&ctx).unwrap())
        .reduce(|x, y| x.compose(&y).unwrap())
        .unwrap();
    assert_eq!(back, l);
}

#[test]
fn probe_meets_lower_bound() {
    let dir = TempDir::new().unwrap();
    let (_, field) = gf16_file(dir.path());
    let out = stdout(&run(&["probe", "--field", s(&field), "--degree", "4", "--trials", "200", "--seed", "1"]));
    let stats: SplitStats = from_json(&out).unwrap();
    assert_eq!(stats.trials, 200);
    assert!(stats.first_try_fraction() >= 1.0 / 9.0);
}

#[test]
fn no_arguments_is_usage_error() {
    let out = run(&["decompose"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn malformed_json_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let field = write(dir.path(), "f.json", "{\"p\": 2,\n \"e\": }");
    let out = run(&["field", "--field", s(&field)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn missing_file_is_usage_error() {
    let out = run(&["field", "--field", "/nonexistent/f.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reducible_modulus_is_domain_error() {
    let dir = TempDir::new().unwrap();
    let field = write(dir.path(), "f.json", r#"{"p": 2, "e": 2, "modulus": [1, 0, 1]}"#);
    let out = run(&["field", "--field", s(&field)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reducible"));
}

#[test]
fn zero_instances_gives_empty_report() {
    let dir = TempDir::new().unwrap();
    let (_, field) = gf16_file(dir.path());
    let out = stdout(&run(&["attack", "--field", s(&field), "--instances", "0"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["instances"].as_array().unwrap().len(), 0);
    assert_eq!(v["successes"], 0);
}

#[test]
fn scenario_successes_verify_decryption() {
    let dir = TempDir::new().unwrap();
    let field = write(dir.path(), "f.json", r#"{"p": 2, "e": 8}"#);
    let out = stdout(&run(&["attack", "--field", s(&field), "--instances", "20", "--bound", "16", "--seed", "3"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let instances = v["instances"].as_array().unwrap();
    assert_eq!(instances.len(), 20);
    for (i, inst) in instances.iter().enumerate() {
        assert_eq!(inst["index"], i);
        assert_ne!(inst["outcome"], "error");
        if inst["outcome"] == "recovered" {
            assert_eq!(inst["sound"], true);
            assert_eq!(inst["decrypt_verified"], true);
        }
    }
}

#[test]
fn policy_cap_and_override() {
    let dir = TempDir::new().unwrap();
    let field = write(dir.path(), "f.json", r#"{"p": 2, "e": 17}"#);
    let out = run(&["field", "--field", s(&field)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PolicyBound"));
    let out = bin().args(["field", "--field", s(&field)]).env("TOOL_POLICY_MAX_Q", "131072").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let (_, field) = gf16_file(dir.path());
    let cases: [&[&str]; 3] = [
        &["keygen", "--field", s(&field), "--seed", "5"],
        &["probe", "--field", s(&field), "--degree", "3", "--trials", "50", "--seed", "5"],
        &["attack", "--field", s(&field), "--instances", "6", "--seed", "5"],
    ];
    for args in cases {
        assert_eq!(stdout(&run(args)), stdout(&run(args)));
    }
    let a = stdout(&run(&["keygen", "--field", s(&field), "--seed", "5"]));
    let b = stdout(&run(&["keygen", "--field", s(&field), "--seed", "6"]));
    assert_ne!(a, b);
}

#[test]
fn keygen_encrypt_decrypt_roundtrip() {
    let dir = TempDir::new().unwrap();
    let (ctx, field) = gf16_file(dir.path());
    let key = write(dir.path(), "k.json", &stdout(&run(&["keygen", "--field", s(&field), "--seed", "2"])));
    let before = std::fs::read(&key).unwrap();
    for m in ctx.elements() {
        let plain = to_json(&ctx.digits(m));
        let cipher = stdout(&run_stdin(&["encrypt", "--key", s(&key)], &plain));
        let input = write(dir.path(), "y.json", &cipher);
        let out = stdout(&run(&["decrypt", "--key", s(&key), "--input", s(&input)]));
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let cands: Vec<Vec<u32>> = serde_json::from_value(v["candidates"].clone()).unwrap();
        assert!(cands.contains(&ctx.digits(m)));
    }
    assert_eq!(std::fs::read(&key).unwrap(), before);
}

#[test]
fn gcldf_of_two_polynomials() {
    let dir = TempDir::new().unwrap();
    let (ctx, field) = gf16_file(dir.path());
    let g = lin(&ctx, &[6, 1]);
    let a = g.compose(&lin(&ctx, &[1, 1])).unwrap();
    let b = g.compose(&lin(&ctx, &[4, 0, 1])).unwrap();
    let pa = write(dir.path(), "a.json", &lin_to_json(&a));
    let pb = write(dir.path(), "b.json", &lin_to_json(&b));
    let out = stdout(&run(&["gcldf", "--field", s(&field), "--poly", s(&pa), "--poly", s(&pb)]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let got: PolyFile = serde_json::from_value(v["gcldf"].clone()).unwrap();
    let got = got.to_lin(&ctx).unwrap();
    let cofactors: Vec<PolyFile> = serde_json::from_value(v["cofactors"].clone()).unwrap();
    for (c, orig) in cofactors.iter().zip([&a, &b]) {
        assert_eq!(got.compose(&c.to_lin(&ctx).unwrap()).unwrap(), *orig);
    }
    assert!(got.skew_degree() >= Some(1));
}
