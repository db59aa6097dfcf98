mod common;

use common::fixture;
use continuum::cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("continuum").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn graph_dot_contains_table_pair() {
    let (code, out, _) = run(&["graph", "gen", "--pattern", "euclid2", "--depth", "2", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"a.d\" -- \"b.c\""));
}

#[test]
fn graph_json_parses() {
    let (code, out, _) = run(&["graph", "gen", "--pattern", "euclid1", "--depth", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 8);
    assert_eq!(v["edges"].as_array().unwrap().len(), 7);
}

#[test]
fn refinement_exit_codes() {
    assert_eq!(run(&["check", "refinement", "--pattern", "euclid1", "--depth", "6"]).0, 0);
}

#[test]
fn homogeneity_exit_codes() {
    assert_eq!(run(&["check", "homogeneity", "--pattern", "euclid2", "--depth", "3"]).0, 0);
    let (code, out, _) = run(&["check", "homogeneity", "--pattern", "sierpinski_triangle", "--depth", "4"]);
    assert_eq!(code, 1);
    assert!(out.contains("witness"));
    assert_eq!(run(&["check", "indiscernibility", "--pattern", &path("pattern_path3.json")]).0, 1);
    assert_eq!(run(&["check", "dimension", "--pattern", "sierpinski_carpet"]).0, 1);
}

#[test]
fn brouwer_witness_json() {
    let (code, out, _) = run(&["fn", "brouwer", "--fn", "head_const", "--depth", "4"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["witness"]["stream_u"], "a.b.b.b");
    assert_eq!(v["witness"]["image_z"], "b.b.b.b");
    assert_eq!(run(&["fn", "brouwer", "--fn", "reverse", "--depth", "8"]).0, 0);
}

#[test]
fn function_checks() {
    assert_eq!(run(&["fn", "continuous", "--fn", "head_const", "--depth", "3"]).0, 1);
    assert_eq!(run(&["fn", "strict", "--fn", "head_const"]).0, 0);
    assert_eq!(run(&["fn", "monotone", "--fn", &path("fn_not_monotone.json"), "--depth", "2"]).0, 1);
    assert_eq!(run(&["fn", "monotone", "--fn", &path("fn_head_const_k2.json"), "--depth", "2"]).0, 0);
    let (code, out, _) = run(&["fn", "image", "--fn", "head_const", "--cell", "a.b.b"]);
    assert_eq!((code, out.as_str()), (0, "a.a.a\n"));
    let (code, _, err) = run(&["fn", "monotone", "--fn", &path("fn_head_const_k2.json"), "--depth", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("k_max"));
}

#[test]
fn complex_commands() {
    let (code, out, _) = run(&["complex", "tree", "--complex", &path("complex_center.json"), "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 3);
    assert_eq!(v["is_tree"], true);
    let (code, out, _) = run(&["complex", "tree", "--bitmap", &path("center.pgm"), "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("graph shape {"));
    let (code, out, _) = run(&["complex", "segments", "--complex", &path("complex_two_blobs.json")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("4 segments"));
    let (code, _, _) = run(&[
        "complex",
        "path",
        "--complex",
        &path("complex_two_blobs.json"),
        "--from",
        "a.d.a",
        "--to",
        "d.a.b",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn malformed_file_names_file_and_location() {
    let (code, _, err) = run(&["complex", "tree", "--complex", &path("bad_complex.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("bad_complex.json"));
    assert!(err.contains("line 2"));
    let (code, _, err) = run(&["check", "dimension", "--pattern", "no/such/file.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("no/such/file.json"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["graph", "gen", "--depth", "x"]).0, 2);
    assert_eq!(run(&["graph", "gen", "--pattern", "euclid0"]).0, 2);
    assert_eq!(run(&["render", "--pattern", "torus"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn render_svg() {
    let (code, out, _) = run(&["render", "--pattern", "euclid1", "--depth", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("<polygon").count(), 8);
    let (code, out, _) = run(&["render", "--complex", &path("complex_center.json")]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("<polygon").count(), 16);
    assert_eq!(out.matches("fill=\"#000000\"").count(), 4);
    let (code, out, _) = run(&["render", "--pattern", "sierpinski_carpet", "--depth", "2", "--overlay"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("<polygon").count(), 64);
    assert!(out.contains("<line"));
    let (code, out, _) = run(&["render", "--pattern", "sierpinski_triangle", "--depth", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("<polygon").count(), 9);
}

#[test]
fn out_flag_writes_file() {
    let target = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli_out.dot");
    let (code, out, _) = run(&["graph", "gen", "--depth", "1", "--out", target.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(&target).unwrap().contains("\"a\" -- \"b\""));
}

#[test]
fn pattern_commands() {
    let (code, out, _) = run(&["pattern", "list"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "klein"));
    let (code, out, _) = run(&["pattern", "show", "--pattern", "euclid1"]);
    assert_eq!(code, 0);
    assert!(out.contains("(a,b) -> (b,a)"));
    let (code, out, _) = run(&["pattern", "show", "--pattern", "moebius", "--format", "json"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"moebius\""));
}

#[test]
fn borders_command() {
    let (code, out, _) = run(&["borders", "--pattern", "euclid2", "--depth", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("rank 0: 4\nrank 1: 8\ninterior: 4\n"));
    assert_eq!(run(&["borders", "--pattern", "sierpinski_triangle"]).0, 2);
}

#[test]
fn sampling_is_seeded() {
    let args = ["complex", "sample", "--depth", "3", "--samples", "20", "--seed", "5", "--format", "json"];
    let (code, a, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(run(&args).1, a);
    let other = run(&["complex", "sample", "--depth", "3", "--samples", "20", "--seed", "6", "--format", "json"]).1;
    assert_ne!(other, a);
}
