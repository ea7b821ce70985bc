mod common;

use boundsearch::cli::run;
use boundsearch::regex::{compile_nfa, parse_pattern};
use boundsearch::search::HitRecord;
use common::fixture_path;
use proptest::prelude::*;
use std::io::{BufRead, BufReader, Read, Write};
use std::process::{Command, Stdio};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("boundsearch").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn fixture() -> String {
    fixture_path().to_string_lossy().into_owned()
}

const HOSTEL_FACETS: [&str; 6] = [
    "--facet",
    "property_type=Student Hostel",
    "--facet",
    "transaction_type=Rent",
    "--facet",
    "location_state=Anambra",
];

#[test]
fn validate_fixture() {
    let o = cli(&["validate", &fixture()]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("20 listings, schema OK"), "{}", o.stdout);
}

#[test]
fn validate_reports_duplicates_with_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.jsonl");
    let text = std::fs::read_to_string(fixture_path()).unwrap();
    let second = text.lines().nth(1).unwrap().to_owned();
    std::fs::write(&path, format!("{text}{second}\n")).unwrap();
    let o = cli(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("line 22"), "{}", o.stderr);
    assert!(o.stderr.contains("L-001"), "{}", o.stderr);
}

#[test]
fn validate_missing_file_is_usage_error() {
    let o = cli(&["validate", "/no/such/file.jsonl"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("/no/such/file.jsonl"));
}

#[test]
fn records_output_for_validate() {
    let o = cli(&["--format", "records", "validate", &fixture()]);
    let v: serde_json::Value = serde_json::from_str(o.stdout.trim()).unwrap();
    assert_eq!(v["listings"], 20);
}

#[test]
fn search_hostel_scenario_human() {
    let mut args = vec!["search", fixture().leak() as &str, "--pattern", "ifi"];
    args.extend(HOSTEL_FACETS);
    let o = cli(&args);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let lines: Vec<_> = o.stdout.lines().collect();
    assert_eq!(lines[0], "6 hits, showing 1-6");
    assert_eq!(lines.len(), 7);
    for (i, id) in ["L-001", "L-002", "L-003", "L-006", "L-009", "L-012"].iter().enumerate() {
        assert!(lines[i + 1].contains(id), "{}", lines[i + 1]);
        assert!(lines[i + 1].contains("[Ifi]te Awka"), "{}", lines[i + 1]);
        assert!(lines[i + 1].trim_start().starts_with(&format!("{}.", i + 1)));
    }
}

#[test]
fn search_records_are_hit_objects() {
    let mut args = vec!["--format", "records", "search", fixture().leak() as &str, "--pattern", "ifi"];
    args.extend(HOSTEL_FACETS);
    let o = cli(&args);
    let hits: Vec<HitRecord> = o.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(hits.len(), 6);
    assert!(hits.iter().all(|h| h.matched_field == "location_locality"));
}

#[test]
fn search_errors_exit_one() {
    let f = fixture();
    let o = cli(&["search", &f, "--pattern", "", "--mode", "keywords"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("bad_parameter"), "{}", o.stderr);

    let o = cli(&["search", &f, "--mode", "regex", "--pattern", "a("]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("pattern_syntax"), "{}", o.stderr);
    assert!(o.stderr.contains("offset 1"), "{}", o.stderr);

    let o = cli(&["search", &f, "--facet", "location_state=Lagos"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("unknown_value"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cli(&[]).code, 2);
    assert_eq!(cli(&["frobnicate"]).code, 2);
    assert_eq!(cli(&["search", &fixture(), "--mode", "glob"]).code, 2);
    assert_eq!(cli(&["search", &fixture(), "--facet", "novalue"]).code, 2);
    assert_eq!(cli(&["search", &fixture(), "--limit", "0"]).code, 2);
    assert_eq!(cli(&["search", &fixture(), "--fields", "price"]).code, 2);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn trace_walkthrough() {
    let o = cli(&["trace", "--pattern", "XYZ", "--input", "ZXYXYZ"]);
    assert_eq!(o.code, 0);
    let starts: Vec<_> = o.stdout.lines().filter(|l| l.starts_with("start ")).collect();
    assert_eq!(starts.len(), 4);
    let verdicts: Vec<_> = o
        .stdout
        .lines()
        .filter(|l| l.contains("non-acceptance") || l.contains("accepted ["))
        .map(str::trim)
        .collect();
    assert_eq!(
        verdicts,
        ["non-acceptance", "non-acceptance", "non-acceptance", "accepted [3, 6)"]
    );
    assert!(o.stdout.trim_end().ends_with("match [3, 6) \"XYZ\""), "{}", o.stdout);
}

#[test]
fn trace_single_symbol() {
    let o = cli(&["trace", "--pattern", "X", "--input", "X"]);
    let reads = o.stdout.lines().filter(|l| l.trim_start().starts_with("read ")).count();
    assert_eq!(reads, 1);
    assert!(o.stdout.contains("accepted [0, 1)"));
}

#[test]
fn trace_empty_input() {
    let o = cli(&["trace", "--pattern", "XYZ", "--input", ""]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().filter(|l| l.starts_with("start ")).count(), 1);
    assert_eq!(o.stdout.lines().filter(|l| l.contains("read ")).count(), 0);
    assert!(o.stdout.trim_end().ends_with("no match"));
}

#[test]
fn trace_pattern_error() {
    let o = cli(&["trace", "--mode", "regex", "--pattern", "a(", "--input", "a"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("pattern_syntax"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_verdict_agrees_with_find_first(pattern in "[ab]{1,3}(\\*)?", input in "[ab]{0,6}") {
        let o = cli(&["--format", "records", "trace", "--mode", "regex", "--pattern", &pattern, "--input", &input]);
        let last: serde_json::Value = serde_json::from_str(o.stdout.lines().last().unwrap()).unwrap();
        let expected = compile_nfa(&parse_pattern(&pattern).unwrap()).find_first(&input);
        match expected {
            None => prop_assert!(last["result"].is_null()),
            Some(span) => {
                prop_assert_eq!(&last["result"]["start"], span.start);
                prop_assert_eq!(&last["result"]["end"], span.end);
            }
        }
    }
}

fn binary() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_boundsearch"));
    cmd.env_remove(boundsearch::service::CORPUS_ENV);
    cmd
}

#[test]
fn binary_exit_statuses() {
    let status = |args: &[&str]| binary().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(status(&["validate", &fixture()]), 0);
    assert_eq!(status(&["validate", "/no/such"]), 2);
    assert_eq!(status(&["search", &fixture(), "--mode", "regex", "--pattern", "*"]), 1);
    assert_eq!(status(&["bogus"]), 2);
}

#[test]
fn binary_serve_and_failures() {
    let mut child = binary()
        .args(["serve", "--corpus", &fixture(), "--bind", "127.0.0.1:0"])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
    let addr = line.trim().strip_prefix("listening on http://").expect(&line).to_owned();

    let mut stream = std::net::TcpStream::connect(&addr).unwrap();
    write!(stream, "GET /api/facets HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n").unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();
    assert!(response.starts_with("HTTP/1.1 200"), "{response}");

    // Port already taken by the running server.
    let out = binary()
        .args(["serve", "--corpus", &fixture(), "--bind", &addr])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains(&addr));
    child.kill().unwrap();
    child.wait().unwrap();

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "not a schema\n").unwrap();
    let out = binary()
        .args(["serve", "--corpus", bad.to_str().unwrap(), "--bind", "127.0.0.1:0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn binary_serve_reads_env_corpus() {
    let mut child = binary()
        .env(boundsearch::service::CORPUS_ENV, fixture())
        .args(["serve", "--bind", "127.0.0.1:0"])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
    assert!(line.starts_with("listening on http://127.0.0.1:"), "{line}");
    child.kill().unwrap();
    child.wait().unwrap();
}
