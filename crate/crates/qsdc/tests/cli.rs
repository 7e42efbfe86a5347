use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qsdc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsdc"))
        .args(args)
        .current_dir(dir)
        .env_remove("QSDC_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn worked_example_run_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let o = qsdc(dir.path(), &["run", "--n-users", "2", "--mode", "partial", "--message", "100111", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("decoded: 100111"));
    let transcript = fs::read_to_string(dir.path().join("transcript.jsonl")).unwrap();
    assert!(transcript.starts_with(r#"{"n_users":2,"mode":"partial","seed":7,"pad_len":0}"#));
    assert!(transcript.trim_end().ends_with(r#"{"final":{"u2":"100111"}}"#));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["run", "--n-users", "1", "--seed", "1"][..],
        &["run", "--message", "100111"],
        &["run", "--seed", "1", "--message", "10x"],
        &["run", "--seed", "1", "--attack", "sideways"],
        &["run", "--seed", "1", "--attack", "intercept", "--target", "2"],
        &["run", "--seed", "1", "--attack", "twoway", "--theta-eps", "4"],
        &["run", "--seed", "1", "--auth-rounds", "2"],
        &["frobnicate"],
    ] {
        assert_eq!(qsdc(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qsdc"))
        .args(["run", "--message", "0xA5"])
        .env("QSDC_SEED", "11")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("seed 11"));
    assert!(stdout(&o).contains("decoded: 10100101"));
}

fn rate_line(out: &str, prefix: &str) -> (f64, f64, usize) {
    let line = out.lines().find(|l| l.starts_with(prefix)).unwrap_or_else(|| panic!("no {prefix} in {out}"));
    let rest = &line[prefix.len()..];
    let nums: Vec<&str> = rest.split(|c: char| !(c.is_ascii_digit() || c == '.')).filter(|s| !s.is_empty()).collect();
    (nums[0].parse().unwrap(), nums[1].parse().unwrap(), nums[3].parse().unwrap())
}

#[test]
fn intercept_sweep_reports_half_and_signals_termination() {
    let dir = tempfile::tempdir().unwrap();
    let o = qsdc(dir.path(), &["run", "--attack", "intercept", "--trials", "10000", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let (mean, _, n) = rate_line(&stdout(&o), "symbol error rate: ");
    let sigma = (0.25 / n as f64).sqrt();
    assert!((mean - 0.5).abs() <= 3.0 * sigma, "{mean} over {n}");
    let (guess, g3, _) = rate_line(&stdout(&o), "attacker Pauli-guess accuracy: ");
    assert!(guess <= 0.5 + g3);
}

#[test]
fn masquerade_run_terminates_authentication() {
    let dir = tempfile::tempdir().unwrap();
    let o = qsdc(dir.path(), &["run", "--attack", "masquerade", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("status: auth_terminated:u1"));
}

#[test]
fn one_way_reading_passes_authentication_but_spoils_the_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let o = qsdc(dir.path(), &["run", "--attack", "oneway", "--n-users", "3", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("auth u1: error rate 0.0000 over 64 rounds, authenticated"));
    assert!(out.contains("status: tampering_alarm"));
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn same_seed_gives_byte_identical_artifacts() {
    let run = |seed: &str| {
        let dir = tempfile::tempdir().unwrap();
        let args = ["run", "--n-users", "3", "--message", "0xBEEF", "--trials", "40", "--csv-dir", ".", "--seed", seed];
        qsdc(dir.path(), &args);
        qsdc(dir.path(), &["curves", "--csv-dir", "."]);
        files(dir.path())
    };
    let a = run("21");
    assert_eq!(a.len(), 7);
    assert_eq!(a, run("21"));
    assert_ne!(a, run("22"));
}

#[test]
fn config_file_fills_in_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), "n-users = 3\nmode = \"partial\"\nmessage = \"101\"\nseed = 4\nout = \"t.jsonl\"\n").unwrap();
    let o = qsdc(dir.path(), &["run", "--config", "run.toml", "--mode", "full"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let t = fs::read_to_string(dir.path().join("t.jsonl")).unwrap();
    assert!(t.starts_with(r#"{"n_users":3,"mode":"full","seed":4,"pad_len":0}"#));
    fs::write(dir.path().join("bad.toml"), "colour = \"blue\"\n").unwrap();
    assert_eq!(qsdc(dir.path(), &["run", "--config", "bad.toml", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(qsdc(dir.path(), &["run", "--config", "missing.toml", "--seed", "1"]).status.code(), Some(2));
}

fn rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let head = r.headers().unwrap().iter().map(String::from).collect();
    let body = r.records().map(|x| x.unwrap().iter().map(|v| v.parse().unwrap()).collect()).collect();
    (head, body)
}

fn has(body: &[Vec<f64>], want: &[f64], rel: f64) -> bool {
    body.iter().any(|row| {
        let (key, val) = row.split_at(row.len() - 1);
        let (wkey, wval) = want.split_at(want.len() - 1);
        key == wkey && (val[0] - wval[0]).abs() <= rel * wval[0].abs()
    })
}

#[test]
fn curves_have_fixed_columns_and_published_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = qsdc(dir.path(), &["curves", "--csv-dir", "out"]);
    assert_eq!(o.status.code(), Some(0));
    let out = dir.path().join("out");
    let (h, a) = rows(&out.join("fig2a.csv"));
    assert_eq!(h, ["total", "joint_info_bits"]);
    assert!(has(&a, &[0.25, 0.5], 1e-12));
    assert_eq!(a.len(), 101);
    let (h, b) = rows(&out.join("fig2b.csv"));
    assert_eq!(h, ["total", "p_e_max"]);
    assert!(has(&b, &[0.25, 0.5], 1e-12));
    let (h, c) = rows(&out.join("fig2c.csv"));
    assert_eq!(h, ["total", "n", "p_e_retrieve"]);
    assert!(has(&c, &[0.0, 16.0, 1.53e-5], 0.01));
    assert!(has(&c, &[0.5, 16.0, 5.96e-8], 0.01));
    let (h, de) = rows(&out.join("fig2de.csv"));
    assert_eq!(h, ["p_e_m", "total", "n", "p_e_retrieve"]);
    assert!(has(&de, &[0.5, 0.0, 16.0, 3.91e-3], 0.01));
    assert!(has(&de, &[0.125, 0.5, 16.0, 2.32e-10], 0.01));
    assert_eq!(de.len(), 7 * 4 * 201);
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("12 of 12 spot values within tolerance"));
}

#[test]
fn tables_report_full_conformance() {
    let dir = tempfile::tempdir().unwrap();
    let o = qsdc(dir.path(), &["tables", "--out", "t"]);
    assert_eq!(o.status.code(), Some(0));
    let report = fs::read_to_string(dir.path().join("t/conformance.txt")).unwrap();
    assert!(report.contains("24 of 24 reference rows match, 0 mismatched"));
    let (h, body) = {
        let mut r = csv::Reader::from_path(dir.path().join("t/decode_tables.csv")).unwrap();
        let h: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
        (h, r.records().count())
    };
    assert_eq!(h, ["n_users", "mode", "publication", "outcome", "glyph", "ops", "bits"]);
    assert_eq!(body, 2 * (8 + 16));
}
