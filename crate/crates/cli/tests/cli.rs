use std::path::{Path, PathBuf};
use std::process::Command as Process;

use gqplab_cli::{run, Command, OutputFormat, RunConfig, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Text report without the config header, which embeds absolute paths.
fn body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with("# config:"))
        .map(|l| format!("{l}\n"))
        .collect()
}

fn assert_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("GQPLAB_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}; rerun with GQPLAB_BLESS=1 after review");
}

#[test]
fn enumeration_streams_match_golden() {
    for n in 0..=2 {
        let mut cfg = RunConfig::new(Command::Enumerate);
        cfg.states = Some(n);
        let out = run(&cfg);
        assert_eq!(out.exit_code, EXIT_PASS);
        assert_golden(&format!("enumerate_{n}.txt"), &body(&out.text));
    }
}

#[test]
fn derived_relations_match_golden() {
    for model in ["uniform3", "ranked4", "nonstandard3"] {
        let cfg = RunConfig::new(Command::Derive).with_input(data(&format!("{model}.gqp")));
        let out = run(&cfg);
        assert_eq!(out.exit_code, EXIT_PASS, "{}", out.text);
        assert_golden(&format!("derive_{model}.txt"), &body(&out.text));
    }
}

#[test]
fn truncated_relation_reports_line_and_column() {
    let cfg = RunConfig::new(Command::CheckGqp).with_input(data("truncated.gqp"));
    let out = run(&cfg);
    assert_eq!(out.exit_code, EXIT_INPUT);
    assert!(out.diagnostics.ends_with("truncated.gqp:2:1: relation block has 2 rows, expected 4"));
}

#[test]
fn missing_empty_relation_fails_with_witness() {
    let mut cfg = RunConfig::new(Command::CheckGqp).with_input(data("missing_empty.gqp"));
    cfg.format = OutputFormat::Machine;
    let out = run(&cfg);
    assert_eq!(out.exit_code, EXIT_FAIL);
    let v: serde_json::Value = serde_json::from_str(&out.machine).unwrap();
    assert_eq!(v["status"], "fail");
    assert_eq!(v["results"]["gqp"][0]["note"], "axiom-4");
    assert_eq!(v["results"]["gqp"][0]["witness"][0]["event"], "1");
}

#[test]
fn missing_input_is_an_input_error() {
    let cfg = RunConfig::new(Command::Derive).with_input(data("does_not_exist.gqp"));
    assert_eq!(run(&cfg).exit_code, EXIT_INPUT);
}

#[test]
fn machine_report_embeds_config() {
    let mut cfg = RunConfig::new(Command::Q7Search);
    cfg.states = Some(1);
    cfg.consequences = Some(2);
    cfg.seed = 7;
    let out = run(&cfg);
    let v: serde_json::Value = serde_json::from_str(&out.machine).unwrap();
    assert_eq!(v["format"], "gqplab-report/1");
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["config"]["command"], "q7-search");
    assert_eq!(v["results"]["verdict"]["status"], "holds-on-instance");
}

#[test]
fn round_trip_of_uniform_relation_is_faithful() {
    let dir = tempfile::tempdir().unwrap();
    let rel = dir.path().join("rel.gqp");
    let derived = run(&RunConfig::new(Command::Derive).with_input(data("uniform2.gqp")));
    let text: String = derived
        .text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("provenance") && !l.starts_with("status"))
        .map(|l| format!("{l}\n"))
        .collect();
    std::fs::write(&rel, text).unwrap();
    let out = run(&RunConfig::new(Command::RoundTrip).with_input(rel.display().to_string()));
    assert_eq!(out.exit_code, EXIT_PASS, "{}", out.text);
    assert!(out.text.contains("relation_match: true"));
}

#[test]
fn binary_exit_codes_and_output_file() {
    let exe = env!("CARGO_BIN_EXE_gqplab");
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let status = Process::new(exe)
        .args(["classify", &data("uniform2.gqp"), "--format", "machine", "--output"])
        .arg(&report)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_PASS));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["results"]["flags"]["standard"], true);

    let out = Process::new(exe).args(["check-gqp", &data("truncated.gqp")]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:1:"));

    let out = Process::new(exe).args(["check-gqp", &data("missing_empty.gqp")]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_FAIL));
}

#[test]
fn zero_budget_is_inconclusive() {
    let mut cfg = RunConfig::new(Command::Enumerate);
    cfg.states = Some(2);
    cfg.budget = 0;
    assert_eq!(run(&cfg).exit_code, gqplab_cli::EXIT_INCONCLUSIVE);
}
