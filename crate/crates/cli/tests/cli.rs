mod common;

use std::fs;

use common::{csv_column, json, run, run_ok, snapshot, write_dated};
use fractalts_core::synth::{cascade_hurst, white_noise};
use fractalts_oracles::ols_slope;

#[test]
fn fair_cascade_file_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(dir.path(), &["generate", "--kind", "cascade", "--p", "0.5", "--levels", "4", "--out", "c.csv"]);
    let v = csv_column(&dir.path().join("c.csv"), "value");
    assert_eq!(v, vec![1.0 / 16.0; 16]);
    let m = json(&dir.path().join("c.manifest.json"));
    assert_eq!(m["command"], "generate");
    assert_eq!(m["seed"], 0);
    assert_eq!(m["invocation"]["spec"]["levels"], 4);
}

#[test]
fn out_of_range_hurst_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["generate", "--kind", "fgn", "--h", "1.3", "--out", "x.csv"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("0 < H < 1"), "{err}");
    assert_eq!(err.lines().count(), 1);
    assert!(snapshot(dir.path()).is_empty());
}

#[test]
fn analyze_without_q_two_omits_hurst() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(dir.path(), &["generate", "--kind", "white_noise", "--length", "2048", "--out", "wn.csv"]);
    let out = run_ok(
        dir.path(),
        &["analyze", "--input", "wn.csv", "--q-min", "-3", "--q-max", "3", "--q-step", "2", "--out", "res"],
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let summary = json(&dir.path().join("res/wn.summary.json"));
    assert!(summary.get("hurst").is_none());
    assert_eq!(summary["q_min"], -3.0);
    assert_eq!(summary["q_max"], 3.0);
    let hq = fs::read_to_string(dir.path().join("res/wn.hq.csv")).unwrap();
    assert_eq!(hq.lines().next(), Some("q,h,r2"));
    assert_eq!(hq.lines().count(), 5);
}

#[test]
fn analyze_recovers_generated_scaling() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(dir.path(), &["generate", "--kind", "cascade", "--p", "0.3", "--levels", "14", "--seed", "1", "--out", "cas.csv"]);
    run_ok(dir.path(), &["generate", "--kind", "fgn", "--h", "0.7", "--length", "8192", "--seed", "1", "--out", "fgn.csv"]);
    run_ok(dir.path(), &["analyze", "--input", "cas.csv", "--input", "fgn.csv", "--out", "res"]);
    let analytic = cascade_hurst(0.3, -5.0) - cascade_hurst(0.3, 5.0);
    let cas = json(&dir.path().join("res/cas.summary.json"));
    assert!((cas["delta_h"].as_f64().unwrap() - analytic).abs() < 0.15);
    let fgn = json(&dir.path().join("res/fgn.summary.json"));
    let h = fgn["hurst"].as_f64().unwrap();
    assert!((0.62..=0.78).contains(&h), "{h}");
    assert!(fgn["delta_h"].as_f64().unwrap() < 0.15);
    let m = json(&dir.path().join("res/batch.analyze.manifest.json"));
    assert_eq!(m["effective"].as_array().unwrap().len(), 2);
    assert_eq!(m["effective"][0]["config"]["detrend_order"], 1);
}

#[test]
fn fluct_points_have_white_noise_slope() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(dir.path(), &["generate", "--kind", "white_noise", "--length", "8192", "--seed", "5", "--out", "wn.csv"]);
    run_ok(dir.path(), &["fluct", "--input", "wn.csv", "--out", "res"]);
    let path = dir.path().join("res/wn.fluct.csv");
    let q = csv_column(&path, "q");
    let x = csv_column(&path, "log_tau");
    let y = csv_column(&path, "log_F");
    let (xs, ys): (Vec<f64>, Vec<f64>) = q
        .iter()
        .zip(x.iter().zip(&y))
        .filter(|(&q, _)| q == 2.0)
        .map(|(_, (&a, &b))| (a, b))
        .unzip();
    assert_eq!(xs.len(), 20);
    let slope = ols_slope(&xs, &ys);
    assert!((0.45..=0.55).contains(&slope), "{slope}");
}

#[test]
fn fluct_on_empty_csv_fails() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.csv"), "date,value\n").unwrap();
    let out = run(dir.path(), &["fluct", "--input", "empty.csv", "--out", "res"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
    assert!(!dir.path().join("res").exists());
}

#[test]
fn xcorr_self_shift_and_disjoint() {
    let dir = tempfile::tempdir().unwrap();
    let w = white_noise(600, 17).unwrap().into_values();
    write_dated(&dir.path().join("a.csv"), &w, 0);
    write_dated(&dir.path().join("b.csv"), &w, 3);
    write_dated(&dir.path().join("far.csv"), &w, 5000);

    run_ok(dir.path(), &["xcorr", "--input", "a.csv", "--input", "a.csv", "--out", "self"]);
    let s = json(&dir.path().join("self/xcorr.summary.json"));
    assert_eq!(s["peak_lag"], 0);
    assert_eq!(s["peak_value"], 1.0);
    let header = fs::read_to_string(dir.path().join("self/xcorr.csv")).unwrap();
    assert_eq!(header.lines().next(), Some("lag,ccf,band"));
    assert_eq!(header.lines().count(), 62);

    run_ok(dir.path(), &["xcorr", "--input", "a.csv", "--input", "b.csv", "--out", "shift"]);
    let s = json(&dir.path().join("shift/xcorr.summary.json"));
    assert_eq!(s["peak_lag"], 3);
    assert_eq!(s["aligned_length"], 597);

    let out = run(dir.path(), &["xcorr", "--input", "a.csv", "--input", "far.csv", "--out", "none"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no overlapping dates"));
}

#[test]
fn failed_batch_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(dir.path(), &["generate", "--kind", "white_noise", "--length", "1024", "--out", "ok.csv"]);
    fs::write(dir.path().join("short.csv"), "value\n1\n2\n3\n").unwrap();
    let out = run(dir.path(), &["analyze", "--input", "ok.csv", "--input", "short.csv", "--out", "res"]);
    assert!(!out.status.success());
    assert!(!dir.path().join("res").exists());
}

#[test]
fn replay_reproduces_outputs() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(dir.path(), &["generate", "--kind", "fgn", "--h", "0.6", "--length", "2048", "--seed", "4", "--out", "gen/f.csv"]);
    run_ok(dir.path(), &["fluct", "--input", "gen/f.csv", "--order", "2", "--out", "res"]);
    run_ok(dir.path(), &["replay", "res/f.fluct.manifest.json", "--out", "again"]);
    assert_eq!(snapshot(&dir.path().join("res")), snapshot(&dir.path().join("again")));
    run_ok(dir.path(), &["replay", "gen/f.manifest.json", "--out", "regen"]);
    assert_eq!(snapshot(&dir.path().join("gen")), snapshot(&dir.path().join("regen")));
}

#[test]
fn json_formats() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(dir.path(), &["generate", "--kind", "white_noise", "--length", "1024", "--format", "json", "--out", "wn.json"]);
    let s = json(&dir.path().join("wn.json"));
    assert_eq!(s["values"].as_array().unwrap().len(), 1024);
    run_ok(dir.path(), &["generate", "--kind", "white_noise", "--length", "1024", "--out", "wn.csv"]);
    run_ok(dir.path(), &["analyze", "--input", "wn.csv", "--format", "json", "--out", "res"]);
    let hq = json(&dir.path().join("res/wn.hq.json"));
    assert_eq!(hq["h"].as_array().unwrap().len(), 11);
    run_ok(dir.path(), &["fluct", "--input", "wn.csv", "--format", "json", "--out", "res"]);
    let table = json(&dir.path().join("res/wn.fluct.json"));
    assert_eq!(table["values"].as_array().unwrap().len(), 11);
}
