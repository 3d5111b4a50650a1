//! End-to-end tests driving the `spectral-risk` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spectral-risk"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Writes a synthetic input file and returns its path.
fn synth_file(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let out = bin()
        .args(["synth", "--output"])
        .arg(&path)
        .args(args)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "synth failed: {}", stderr(&out));
    path
}

#[test]
fn missing_input_names_the_path() {
    let out = run(&["spectrum", "--input", "/no/such/file.csv"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("/no/such/file.csv"));
}

#[test]
fn constant_input_writes_zero_spectrum_and_warns() {
    let dir = TempDir::new().unwrap();
    let input = synth_file(dir.path(), "flat.csv", &["--kind", "constant", "--n", "40"]);
    let spec_path = dir.path().join("spec.csv");
    let out = bin()
        .args(["spectrum", "--points-per-osc", "10", "--input"])
        .arg(&input)
        .arg("--output")
        .arg(&spec_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stderr(&out).contains("no risk signal"));

    let text = std::fs::read_to_string(&spec_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("omega,re,im,abs"));
    for line in lines {
        let abs: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(abs < 1e-10 * 100.0, "nonzero amplitude in {line}");
    }
}

#[test]
fn modulated_spectrum_peaks_near_period_frequency() {
    let dir = TempDir::new().unwrap();
    let input = synth_file(
        dir.path(),
        "mod3.csv",
        &["--kind", "modulated", "--n", "301", "--period", "3", "--epsilon", "0.02"],
    );
    let spec_path = dir.path().join("spec.csv");
    let out = bin()
        .args(["spectrum", "--points-per-osc", "30", "--input"])
        .arg(&input)
        .arg("--output")
        .arg(&spec_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));

    let text = std::fs::read_to_string(&spec_path).unwrap();
    let mut best = (0.0f64, 0.0f64);
    for line in text.lines().skip(1) {
        let mut cols = line.split(',');
        let omega: f64 = cols.next().unwrap().parse().unwrap();
        let abs: f64 = cols.nth(2).unwrap().parse().unwrap();
        if abs > best.1 {
            best = (omega, abs);
        }
    }
    let target = std::f64::consts::TAU / 3.0;
    assert!(
        (best.0 - target).abs() < 0.05,
        "peak at {} expected near {target}",
        best.0
    );
}

#[test]
fn report_emits_expected_fields() {
    let dir = TempDir::new().unwrap();
    let input = synth_file(
        dir.path(),
        "mod3.csv",
        &["--kind", "modulated", "--n", "301", "--period", "3", "--epsilon", "0.02"],
    );
    let out = bin()
        .args(["report", "--points-per-osc", "50", "--format", "structured", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));

    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let irr_c = doc["irrationality_continuous"].as_f64().unwrap();
    let irr_d = doc["irrationality_discrete"].as_f64().unwrap();
    assert!(irr_c > 0.0 && irr_c < 1.0);
    assert!(irr_d > 0.0 && irr_d <= 1.0);
    assert!(doc["volatility_annualized"].as_f64().unwrap() > 0.0);

    let bands = doc["band_shares"].as_array().unwrap();
    assert_eq!(bands.len(), 2);
    let hf = &bands[1];
    assert_eq!(hf["lo_days"].as_f64(), Some(5.0));
    assert_eq!(hf["hi_days"].as_f64(), Some(1.0));
    // band 1/(5 days)..1/(1 day) covers 80% of the default range; the 3-day
    // modulation concentrates mass inside it
    assert!(hf["share"].as_f64().unwrap() > 0.8);
}

#[test]
fn exponential_report_is_no_risk_signal() {
    let dir = TempDir::new().unwrap();
    let input = synth_file(
        dir.path(),
        "exp.csv",
        &["--kind", "exponential", "--n", "50", "--rate", "0.001"],
    );
    let out = bin()
        .args(["report", "--points-per-osc", "10", "--format", "structured", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["outcome"].as_str(), Some("no risk signal"));
}

#[test]
fn cumulative_fails_on_flat_input() {
    let dir = TempDir::new().unwrap();
    let input = synth_file(dir.path(), "flat.csv", &["--kind", "constant", "--n", "40"]);
    let out = bin()
        .args(["cumulative", "--points-per-osc", "10", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(stderr(&out).contains("no risk signal"));
}

#[test]
fn cumulative_exports_monotone_normalized_curve() {
    let dir = TempDir::new().unwrap();
    let input = synth_file(
        dir.path(),
        "walk.csv",
        &["--kind", "randomwalk", "--n", "80", "--seed", "11"],
    );
    let out = bin()
        .args(["cumulative", "--points-per-osc", "10", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut prev = -1.0;
    let mut last = 0.0;
    for line in text.lines().skip(1) {
        let fnorm: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(fnorm >= prev, "Fnorm decreased: {line}");
        prev = fnorm;
        last = fnorm;
    }
    assert!((last - 1.0).abs() < 1e-12);
}

#[test]
fn compare_writes_two_documents() {
    let dir = TempDir::new().unwrap();
    let a = synth_file(
        dir.path(),
        "a.csv",
        &["--kind", "randomwalk", "--n", "60", "--seed", "1"],
    );
    let b = synth_file(
        dir.path(),
        "b.csv",
        &["--kind", "exponential", "--n", "60", "--rate", "0.001"],
    );
    let out = bin()
        .args(["report", "--points-per-osc", "10", "--input"])
        .arg(&a)
        .arg("--compare")
        .arg(&b)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("series_id=a"));
    assert!(text.contains("series_id=b"));
    assert!(text.contains("outcome=no risk signal"));
}

#[test]
fn verify_passes_on_random_walk() {
    let dir = TempDir::new().unwrap();
    let input = synth_file(
        dir.path(),
        "walk.csv",
        &["--kind", "randomwalk", "--n", "60", "--seed", "7"],
    );
    let out = bin()
        .args(["verify", "--samples", "100", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("max relative deviation"));
}

#[test]
fn spectrum_bytes_do_not_depend_on_worker_count() {
    let dir = TempDir::new().unwrap();
    let input = synth_file(
        dir.path(),
        "walk.csv",
        &["--kind", "randomwalk", "--n", "120", "--seed", "3"],
    );
    let mut files = Vec::new();
    for workers in ["1", "4"] {
        let path = dir.path().join(format!("spec-{workers}.csv"));
        let out = bin()
            .args(["spectrum", "--points-per-osc", "20", "--workers", workers, "--input"])
            .arg(&input)
            .arg("--output")
            .arg(&path)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn malformed_band_list_is_rejected() {
    let dir = TempDir::new().unwrap();
    let input = synth_file(dir.path(), "walk.csv", &["--kind", "randomwalk", "--n", "40"]);
    let out = bin()
        .args(["report", "--bands", "1:50", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(stderr(&out).contains("lo > hi"));
}

#[test]
fn synth_rejects_unknown_kind() {
    let out = run(&["synth", "--kind", "sawtooth"]);
    assert!(!out.status.success());
}
