//! End-to-end CLI tests: golden outputs, exit codes, determinism, and the
//! shipped example files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twistcoh"))
}

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(format!("{name}.cdga"))
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {out:?}");
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn cohomology_table_is_golden_and_deterministic() {
    let args = ["cohomology", &example("heisenberg")];
    let first = stdout(&args);
    assert!(first.contains("degree  dim  representatives"));
    assert!(first.contains("1       2    x; y"));
    assert!(first.contains("2       2    x*z; y*z"));
    assert!(first.contains("3       1    x*y*z"));
    assert!(first.contains("note: total dimension 6"));
    let second = stdout(&args);
    assert_eq!(first, second, "byte-deterministic output");
}

#[test]
fn ss_csv_header_and_totals() {
    let out = stdout(&["ss", &example("m-heisenberg-cp2"), "--format", "csv"]);
    assert!(out.starts_with("page,total,stable\n"));
    for line in ["2,18,no", "4,10,no", "6,8,yes", "7,8,yes"] {
        assert!(out.contains(&format!("{line}\n")), "missing `{line}` in {out}");
    }
}

#[test]
fn massey_json_fields() {
    let out = stdout(&[
        "massey",
        &example("heisenberg"),
        "x",
        "x",
        "y",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    let cols = v["sections"][0]["columns"].as_array().unwrap();
    for field in ["representative", "indeterminacy_dim", "nonzero"] {
        assert!(cols.iter().any(|c| c == field), "missing column {field}");
    }
    let row = v["sections"][0]["rows"][0].as_array().unwrap();
    assert_eq!(row[0], "x*z");
    assert_eq!(row[3], "true");
}

#[test]
fn twisted_requires_twist() {
    let out = run(&["twisted", &example("cp2")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exit_code_usage() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(
        run(&["cohomology", &example("cp2"), "--format", "xml"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn exit_code_file_errors() {
    assert_eq!(run(&["cohomology", "/no/such/file.cdga"]).status.code(), Some(2));
    let dir = std::env::temp_dir().join("twistcoh-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.cdga");
    std::fs::write(&bad, "generator x degree=1\ngenerator z degree=1\nd z = x\n").unwrap();
    let out = run(&["cohomology", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "error names the line: {err}");
}

#[test]
fn dim_cap_env_is_enforced() {
    let out = bin()
        .args(["cohomology", &example("heisenberg")])
        .env("TWISTCOH_MAX_DIM", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn obstructed_massey_is_a_math_error() {
    // {t,t,t} on CP^2: t*t is not exact
    let out = run(&["massey", &example("cp2"), "t", "t", "t"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn non_degree_three_twist_warns() {
    let out = run(&["twisted", &example("tower3")]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("warning"), "degree-1 twist warns: {err}");
}

#[test]
fn example_texts_round_trip_through_the_parser() {
    for name in twistcoh::cdgafile::EXAMPLE_NAMES {
        let text = stdout(&["example", name]);
        assert_eq!(text, twistcoh::cdgafile::example_text(name).unwrap());
        let parsed = twistcoh::cdgafile::parse_file(&text).unwrap();
        assert_eq!(twistcoh::cdgafile::emit(&parsed), text);
        // shipped file matches the built-in emitter
        let shipped = std::fs::read_to_string(example(name)).unwrap();
        assert_eq!(shipped, text, "examples/{name}.cdga is current");
    }
    assert_eq!(run(&["example", "nope"]).status.code(), Some(1));
}

#[test]
fn jring_and_wang_goldens() {
    let out = stdout(&["jring", "--max-weight", "8", "--format", "csv"]);
    let dims: Vec<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(dims, ["1", "1", "1", "1", "2", "2", "4", "4", "7"]);
    let wang = stdout(&["wang", "--max-weight", "6"]);
    assert!(wang.contains("every positive-weight invariant is annihilated: true"));
}

#[test]
fn hankel_verification_flags() {
    let out = stdout(&["hankel", "--p", "2", "--q", "2", "--verify", "--reparam"]);
    assert!(out.contains("h_(2,2)(c(a/b)) = R(a,b)   true"));
    assert!(out.contains("h_(3,3)(c(a/b)) = 0        true"));
    assert!(out.contains("h_(2,2) Moebius-invariant  true"));
}
