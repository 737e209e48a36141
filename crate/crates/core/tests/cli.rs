//! The `piw` binary: subcommands, persisted stages and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn piw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_piw"))
        .args(args)
        .env("RUST_LOG", "warn")
        .env_remove("PIW_THREADS")
        .output()
        .expect("running piw")
}

fn stdout(args: &[&str]) -> String {
    let out = piw(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn nsoks_lists_representations() {
    let text = stdout(&["nsoks", "25", "7"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[0], "5^1 + 0^6");
    assert_eq!(*lines.last().unwrap(), "7");
    assert_eq!(stdout(&["nsoks", "25", "7", "--count-only"]), "7\n");
}

#[test]
fn canon_prints_minimal_form_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.txt");
    std::fs::write(&input, "3 4\n4 -3\n").unwrap();
    for flag in ["--fast", "--exhaustive"] {
        let text = stdout(&["canon", flag, "--witness", "--in", path(&input)]);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("-4 -3"));
        assert_eq!(lines.next(), Some("-3 4"));
        assert!(lines.next().unwrap().starts_with("# rows: "));
    }
}

#[test]
fn stage_outputs_match_the_fused_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let generated = dir.path().join("gen.jsonl");
    let report = dir.path().join("report.jsonl");
    let out_dir = dir.path().join("run");
    stdout(&["generate", "4", "4", "9", "--mindepth", "2", "--out", path(&generated)]);
    let table = stdout(&[
        "classify", "--in", path(&generated), "--th", "--decompose", "--report", path(&report),
    ]);
    let fused = stdout(&["pipeline", "4", "4", "9", "--mindepth", "2", "--out", path(&out_dir)]);
    assert_eq!(table, fused);
    let read = |p: &Path| std::fs::read(p).unwrap();
    assert_eq!(read(&generated), read(&out_dir.join("generated.jsonl")));
    assert_eq!(read(&report), read(&out_dir.join("report.jsonl")));
    assert_eq!(fused.as_bytes(), read(&out_dir.join("table.txt")));

    // records survive a read/write cycle byte for byte
    let (k, matrices) = piw::pipeline::read_record_file(&generated).unwrap();
    let copy = dir.path().join("copy.jsonl");
    piw::pipeline::write_record_file(&copy, k.unwrap(), &matrices).unwrap();
    assert_eq!(read(&copy), read(&generated));

    let inv = stdout(&["invariant", "--depth", "2", "--in", path(&generated)]);
    assert_eq!(inv.lines().count(), matrices.len());
    let dec = stdout(&["decompose", "--in", path(&out_dir.join("hclasses.jsonl"))]);
    assert!(dec.contains("primitive="));
}

#[test]
fn thread_count_leaves_files_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    stdout(&["pipeline", "5", "5", "4", "--mindepth", "2", "--threads", "1", "--out", path(&a)]);
    let out = Command::new(env!("CARGO_BIN_EXE_piw"))
        .args(["pipeline", "5", "5", "4", "--mindepth", "2", "--out", path(&b)])
        .env("PIW_THREADS", "4")
        .env("RUST_LOG", "warn")
        .output()
        .unwrap();
    assert!(out.status.success());
    for f in ["generated.jsonl", "hclasses.jsonl", "report.jsonl", "table.txt"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(piw(&["generate", "3", "2", "25"]).status.code(), Some(2));
    let missing = dir.path().join("missing.jsonl");
    assert_eq!(piw(&["classify", "--in", path(&missing)]).status.code(), Some(3));
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"m\":1,\"n\":1,\"k\":1,\"rows\":[[1]]}\nnot json\n").unwrap();
    let out = piw(&["classify", "--in", path(&bad)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn empty_pipeline_is_valid() {
    let text = stdout(&["pipeline", "1", "1", "7"]);
    assert!(text.contains("inputs: 0"));
}
