use std::path::Path;
use std::process::{Command, Output};

use etascan_cli::commands::residue_table;
use etascan_core::closedform::delta_closed;
use serde_json::Value;

fn etascan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etascan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn data_lines(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn dir_arg(dir: &Path) -> String {
    dir.display().to_string()
}

#[test]
fn sieve_cache_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = dir_arg(tmp.path());
    let first = etascan(&["sieve-cache", "--x-limit", "100000", "--cache-dir", &dir]);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    assert!(tmp.path().join("primes-100000.ptab").exists());
    assert!(stdout(&first).contains("100000,9592,fresh,"));

    let second = etascan(&["sieve-cache", "--x-limit", "100000", "--cache-dir", &dir]);
    assert_eq!(code(&second), 0);
    assert!(stderr(&second).contains("cache hit"));
    assert!(stdout(&second).contains("100000,9592,cache,"));
}

#[test]
fn unwritable_cache_is_an_io_failure() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, b"x").unwrap();
    let dir = dir_arg(&blocker.join("sub"));
    let out = etascan(&["sieve-cache", "--x-limit", "1000", "--cache-dir", &dir]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn integral_commands_need_re_above_one() {
    for cmd in ["verify-lemma1", "cross-validate"] {
        let out = etascan(&[cmd, "--s0", "0.9"]);
        assert_eq!(code(&out), 3, "{cmd}");
    }
}

#[test]
fn parse_errors_and_help() {
    assert_eq!(code(&etascan(&["--help"])), 0);
    assert_eq!(code(&etascan(&["theorem-scan", "--help"])), 0);
    assert_eq!(code(&etascan(&["bogus"])), 3);
    assert_eq!(code(&etascan(&["theorem-scan", "--samples", "500"])), 3);
    assert_eq!(code(&etascan(&["theorem-scan", "--s0", "1,2,3"])), 3);
}

#[test]
fn invalid_disk_exits_four() {
    let out = etascan(&["theorem-scan", "--s0", "2", "--h", "3"]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("disk reaches Re <= 1/3"));
    assert_eq!(code(&etascan(&["theorem-scan", "--s0", "2", "--h", "1"])), 4);
}

#[test]
fn single_row_scan() {
    let out = etascan(&[
        "theorem-scan",
        "--s0",
        "2",
        "--h",
        "1.6",
        "--n-max",
        "0",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = json(&out);
    let rows = doc["tables"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    let lambda = rows[0]["lambda"].as_f64().unwrap();
    assert!((lambda - 0.1361182).abs() < 1e-6, "{lambda}");
    assert_eq!(doc["verdict"], "PASS");
    for c in doc["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "not-applicable");
    }
}

#[test]
fn scan_csv_layout() {
    let out = etascan(&["theorem-scan", "--n-max", "3"]);
    let text = stdout(&out);
    let lines = data_lines(&text);
    assert_eq!(
        lines[0],
        "n,e_re,e_im,target_re,target_im,lambda,ratio_re,ratio_im,noise"
    );
    assert_eq!(lines.len(), 5);
    assert!(text.contains("# flags: "));
    assert!(text.contains("\"h\":2.58333"));
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let base = ["theorem-scan", "--s0", "2.5,0.5", "--n-max", "12", "--samples", "256"];
    let csv = etascan(&[&base[..], &["--format", "csv"]].concat());
    let js = etascan(&[&base[..], &["--format", "json"]].concat());
    assert_eq!(code(&csv), code(&js));
    let text = stdout(&csv);
    let lines = data_lines(&text);
    let header: Vec<&str> = lines[0].split(',').collect();
    let doc = json(&js);
    let rows = doc["tables"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), lines.len() - 1);
    for (line, row) in lines[1..].iter().zip(rows) {
        for (name, cell) in header.iter().zip(line.split(',')) {
            let from_json = &row[*name];
            let a: f64 = cell.parse().unwrap();
            let b = from_json.as_f64().unwrap();
            assert_eq!(a.to_bits(), b.to_bits(), "{name}");
        }
    }
}

#[test]
fn default_scan_reports_fit() {
    let out = etascan(&["theorem-scan", "--format", "json"]);
    let doc = json(&out);
    let summary = &doc["summary"];
    let rate = summary["fitted_rate"].as_f64().unwrap();
    assert!((0.90..=0.97).contains(&rate), "{rate}");
    assert_eq!(summary["trusted_nmax"], 80);
    let names: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["noise-floor", "negative-slope", "halving", "rate-below-one"]);
    let expected = if doc["verdict"] == "PASS" { 0 } else { 1 };
    assert_eq!(code(&out), expected);
}

#[test]
fn residue_passes_and_mutation_fails() {
    let out = etascan(&["verify-residue"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(data_lines(&text)[0], "s,g,distance_to_one");

    let (rows, ok) = residue_table(delta_closed).unwrap();
    assert!(ok);
    assert!((rows[2].1 - 1.0).abs() < 0.01);
    let (_, mutated) = residue_table(|s| delta_closed(s).map(|d| d * s)).unwrap();
    assert!(!mutated);
}

#[test]
fn lemma1_at_two() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = dir_arg(tmp.path());
    let out = etascan(&[
        "verify-lemma1",
        "--s0",
        "2",
        "--x-limit",
        "100000",
        "--cache-dir",
        &dir,
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = json(&out);
    let row = &doc["tables"][0]["rows"][0];
    assert!(row["residual"].as_f64().unwrap() <= row["budget"].as_f64().unwrap());
    assert_eq!(doc["metadata"]["sieve_limit"], 100000);
}

#[test]
fn cross_validate_agrees_and_warns_near_one() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = dir_arg(tmp.path());
    let out = etascan(&[
        "cross-validate",
        "--s0",
        "3",
        "--x-limit",
        "100000",
        "--cache-dir",
        &dir,
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(data_lines(&text).len(), 12);
    assert!(!stderr(&out).contains("WARN"));

    let near = etascan(&[
        "cross-validate",
        "--s0",
        "1.05",
        "--x-limit",
        "100000",
        "--cache-dir",
        &dir,
    ]);
    assert!(stderr(&near).contains("tails dominate"), "{}", stderr(&near));
    assert!(stdout(&near).contains("# tails_dominate: 1"));
}

#[test]
fn dump_steps_writes_jumps() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = dir_arg(tmp.path());
    let out_file = tmp.path().join("psi.csv");
    let out = etascan(&[
        "dump-steps",
        "--which",
        "psi",
        "--x-limit",
        "10",
        "--cache-dir",
        &dir,
        "--out",
        &dir_arg(&out_file),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(out_file).unwrap();
    let lines = data_lines(&text);
    assert_eq!(lines[0], "abscissa,cumulative_value");
    let xs: Vec<u64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(xs, [2, 3, 4, 5, 7, 8, 9]);
    let last: f64 = lines.last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((last - (8f64.ln() + 9f64.ln() + 5f64.ln() + 7f64.ln())).abs() < 1e-12);
}
