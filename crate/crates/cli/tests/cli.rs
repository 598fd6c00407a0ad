use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use exactprob::dsl::{emit_model, parse_model};
use exactprob::qkd::{eve_model_file, qkd_model_file};

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_exactprob"))
}

fn run(args: &[&str]) -> Output {
    exe().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = exe()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn model(name: &str) -> String {
    root().join("models").join(name).display().to_string()
}

/// Compares with a checked-in file; `UPDATE_GOLDEN=1` rewrites it instead.
fn golden(path: &Path, actual: &str) {
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("{}: {e}; run with UPDATE_GOLDEN=1", path.display()));
    assert!(expected == actual, "{} differs:\n{actual}", path.display());
}

fn temp_model(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("exactprob-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn qkd_goldens() {
    for demo in ["table", "tree", "security", "eve"] {
        let out = run(&["qkd", demo]);
        assert!(out.status.success(), "{demo}: {}", stderr(&out));
        golden(
            &root().join(format!("tests/golden/qkd_{demo}.txt")),
            &stdout(&out),
        );
    }
}

#[test]
fn bundled_models_are_canonical_emissions() {
    for (name, file) in [("qkd.fpm", qkd_model_file()), ("eve.fpm", eve_model_file())] {
        let text = emit_model(&file);
        golden(&root().join("models").join(name), &text);
        assert_eq!(parse_model(&text).unwrap(), file);
    }
}

#[test]
fn qkd_table_has_sixteen_rows() {
    let out = stdout(&run(&["qkd", "table"]));
    assert_eq!(out.lines().count(), 17);
    let csv = stdout(&run(&["qkd", "table", "--format", "csv"]));
    assert_eq!(csv.lines().count(), 17);
    let jsonl = stdout(&run(&["qkd", "table", "--format", "jsonl"]));
    assert_eq!(jsonl.lines().count(), 16);
}

#[test]
fn qkd_reports_contain_the_key_values() {
    let sec = stdout(&run(&["qkd", "security"]));
    assert!(sec.contains("P(BmOne) = 1/2"));
    assert!(sec.contains("P(AsOne|BmOne) = 3/4"));
    assert!(sec.contains("error = 1 - P(AsOne|BmOne) = 1/4"));
    assert_eq!(sec.matches("  1/8  ").count(), 8);
    let eve = stdout(&run(&["qkd", "eve"]));
    assert!(eve.contains("sifted_qber = 1/4"));
}

#[test]
fn check_exit_codes() {
    let ok = run(&["check", &model("qkd.fpm")]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    assert!(stdout(&ok).contains("16 outcomes"));
    assert_eq!(run(&["check", &model("eve.fpm")]).status.code(), Some(0));

    let short = temp_model("short.fpm", "vars: a\nprior:\n  T -> 1/2\n  F -> 3/8\n");
    let bad = run(&["check", short.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("7/8"), "{}", stderr(&bad));
    assert!(stdout(&bad).is_empty());

    let missing = run(&["check", "/definitely/not/here.fpm"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("cannot read"));
}

#[test]
fn check_reads_standard_input() {
    let ok = run_stdin(&["check", "-"], "vars: a\nprior:\n  default 1/2\n");
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    let bad = run_stdin(
        &["check", "-"],
        "vars: a\nprior:\n  T -> 1/2\n  F -> 1/2\n  T -> 0\n",
    );
    assert_eq!(bad.status.code(), Some(1));
    assert!(
        stderr(&bad).starts_with("<stdin>:5:3: duplicate pattern"),
        "{}",
        stderr(&bad)
    );
}

#[test]
fn query_examples() {
    let qkd = model("qkd.fpm");
    let q = |query: &str| stdout(&run(&["query", &qkd, query]));
    assert_eq!(q("P(AsOne|BmOne)"), "3/4 (0.750000)\n");
    assert_eq!(q("P(BmOne)"), "1/2 (0.500000)\n");
    assert_eq!(q("P(AsOne|AsOne)"), "1 (1.000000)\n");
    let total = q("total P(BmOne) by signs(AsOne, AchX, BchX)");
    assert!(total.starts_with("1/2 (0.500000)\nblock"));
    assert_eq!(total.lines().count(), 10);
    assert_eq!(
        q("partition {AsOne, !AsOne}"),
        "valid partition, 2 blocks\n"
    );
    let places = stdout(&run(&["query", &qkd, "P(BmOne)", "--places", "2"]));
    assert_eq!(places, "1/2 (0.50)\n");
}

#[test]
fn query_errors_are_located_and_exit_one() {
    let qkd = model("qkd.fpm");
    let undeclared = run(&["query", &qkd, "P(Nope)"]);
    assert_eq!(undeclared.status.code(), Some(1));
    assert!(
        stderr(&undeclared).starts_with("query:1:3: "),
        "{}",
        stderr(&undeclared)
    );
    let syntax = run(&["query", &qkd, "P(AsOne"]);
    assert_eq!(syntax.status.code(), Some(1));
    assert!(stderr(&syntax).starts_with("query:1:"));
    let null = run(&["query", &qkd, "P(AsOne | false)"]);
    assert_eq!(null.status.code(), Some(1));
    assert!(stderr(&null).contains("probability zero"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["qkd", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["qkd", "table", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["qkd", "table", "--format", "xml"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn machine_formats_keep_rationals_as_strings() {
    let qkd = model("qkd.fpm");
    let csv = stdout(&run(&["query", &qkd, "P(AsOne|AsOne)", "--format", "csv"]));
    assert_eq!(
        csv,
        "\"query\",\"p\",\"approx\"\n\"P(AsOne | AsOne)\",\"1\",1.000000\n"
    );

    let line = stdout(&run(&[
        "query",
        &qkd,
        "P(AsOne | BmOne)",
        "--format",
        "jsonl",
    ]));
    let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(v["p"], "3/4");
    assert_eq!(v["approx"], "0.750000");

    let total = stdout(&run(&[
        "query",
        &qkd,
        "total P(BmOne) by signs(AchX)",
        "--format",
        "jsonl",
    ]));
    let rows: Vec<serde_json::Value> = total
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["block"], "AchX");
    assert_eq!(rows[0]["p_block"], "1/2");
    assert_eq!(rows[2]["block"], "total");
    assert_eq!(rows[2]["joint"], "1/2");

    let table = stdout(&run(&["emit", &qkd, "--format", "jsonl"]));
    let first: serde_json::Value = serde_json::from_str(table.lines().next().unwrap()).unwrap();
    assert_eq!(first["outcome"]["AsOne"], false);
    assert_eq!(first["p"], "1/8");
}

#[test]
fn emit_is_canonical_and_idempotent() {
    let messy = temp_model(
        "messy.fpm",
        "# two coins\nvars:\n a b\nqueries:\n P( a|b )\nprior:\n 1 1 -> 1/4\n default 1/4\n",
    );
    let once = run(&["emit", messy.to_str().unwrap()]);
    assert_eq!(once.status.code(), Some(0), "{}", stderr(&once));
    let text = stdout(&once);
    assert_eq!(
        text,
        "vars: a b\n\nprior:\n  T T -> 1/4\n  default 1/4\n\nqueries:\n  P(a | b)\n"
    );
    let twice = run_stdin(&["emit", "-"], &text);
    assert_eq!(stdout(&twice), text);
}

#[test]
fn output_is_deterministic() {
    for args in [["qkd", "security"], ["qkd", "eve"]] {
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}
