use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fmtrack_core::wav::write_wav;
use fmtrack_core::Signal;
use serde_json::Value;
use tempfile::TempDir;

fn fmtrack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fmtrack"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = fmtrack(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn synth_vowel(dir: &TempDir) -> PathBuf {
    let wav = dir.path().join("vowel.wav");
    ok(&["synth", "--output", path_str(&wav)]);
    wav
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn manifest(output: &Path) -> Value {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    serde_json::from_str(&fs::read_to_string(PathBuf::from(name)).unwrap()).unwrap()
}

fn cell(row: &[String], i: usize) -> Option<f64> {
    row.get(i).filter(|s| !s.is_empty()).map(|s| s.parse().unwrap())
}

/// Share of rows after 0.2 s whose column `col` lies within `tol` of `truth`.
fn share_within(rows: &[Vec<String>], col: usize, truth: f64, tol: f64) -> f64 {
    let late: Vec<_> = rows.iter().filter(|r| cell(r, 1).unwrap() >= 0.2).collect();
    let hits = late
        .iter()
        .filter(|r| cell(r, col).is_some_and(|f| (f - truth).abs() <= tol * truth))
        .count();
    hits as f64 / late.len() as f64
}

#[test]
fn synth_writes_int16_vowel_and_manifest() {
    let dir = TempDir::new().unwrap();
    let wav = synth_vowel(&dir);
    let s = fmtrack_core::wav::read_wav(&wav).unwrap();
    assert_eq!(s.len(), 8000);
    assert_eq!(s.sample_rate_hz(), 8000.0);
    let peak = s.samples().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert_eq!(peak, 16000.0);
    let m = manifest(&wav);
    assert_eq!(m["command"], "synth");
    assert_eq!(m["params"]["vowel"]["pitch_hz"], 100.0);
}

#[test]
fn track_rls_on_synthetic_vowel() {
    let dir = TempDir::new().unwrap();
    let wav = synth_vowel(&dir);
    let out = dir.path().join("rls.csv");
    ok(&[
        "track", "--input", path_str(&wav), "--method", "rls", "--order", "8", "--lambda", "0.99", "--nformants", "3",
        "--output", path_str(&out),
    ]);
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["sample_index", "time_s", "f1_hz", "f2_hz", "f3_hz"]);
    assert!(share_within(&rows, 2, 500.0, 0.05) >= 0.9);
    assert!(share_within(&rows, 3, 1500.0, 0.05) >= 0.9);
    let first: usize = rows[0][0].parse().unwrap();
    let second: usize = rows[1][0].parse().unwrap();
    assert_eq!((first % 64, second - first), (0, 64));

    let m = manifest(&out);
    let digest = {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(fs::read(&wav).unwrap()))
    };
    assert_eq!(m["inputs"][0]["sha256"], Value::String(digest));
    assert_eq!(m["params"]["track"]["method"]["Adaptive"]["method"], "rls");
    assert_eq!(m["params"]["track"]["method"]["Adaptive"]["lambda"], 0.99);
    assert_eq!(m["outputs"][0], path_str(&out));
}

#[test]
fn track_matches_library_pipeline() {
    use fmtrack_core::adaptive::PredictorConfig;
    use fmtrack_core::formant::{track_formants, TrackConfig, TrackMethod};

    let dir = TempDir::new().unwrap();
    let wav = synth_vowel(&dir);
    let out = dir.path().join("t.json");
    ok(&["track", "--input", path_str(&wav), "--method", "rls", "--output", path_str(&out)]);
    let from_cli: fmtrack_core::formant::FormantTrack =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();

    let signal = fmtrack_core::wav::read_wav(&wav).unwrap();
    let cfg = TrackConfig::new(TrackMethod::Adaptive(PredictorConfig::Rls { lambda: 0.99, delta: None }));
    let direct = track_formants(&signal, &cfg, fmtrack_core::Execution::Sequential).unwrap();
    assert_eq!(from_cli.entries.len(), direct.entries.len());
    for (a, b) in from_cli.entries.iter().zip(&direct.entries) {
        assert_eq!(a.sample_index, b.sample_index);
        for (x, y) in a.freqs_hz.iter().zip(&b.freqs_hz) {
            match (x, y) {
                (Some(x), Some(y)) => assert!((x - y).abs() <= 1e-9 * y),
                (None, None) => {}
                _ => panic!("presence differs"),
            }
        }
    }
}

#[test]
fn track_lms_runs_on_normalized_input() {
    let dir = TempDir::new().unwrap();
    let wav = synth_vowel(&dir);
    let out = dir.path().join("lms.csv");
    ok(&[
        "track", "--input", path_str(&wav), "--method", "lms", "--order", "8", "--alpha", "0.2", "--normalize",
        "--output", path_str(&out),
    ]);
    let (_, rows) = read_csv(&out);
    assert!(share_within(&rows, 2, 500.0, 0.05) >= 0.8);
}

#[test]
fn lms_divergence_exits_nonzero_without_output() {
    let dir = TempDir::new().unwrap();
    let wav = synth_vowel(&dir);
    let out = dir.path().join("never.csv");
    let res = fmtrack(&["track", "--input", path_str(&wav), "--method", "lms", "--output", path_str(&out)]);
    assert_eq!(res.status.code(), Some(3));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("diverged"), "{err}");
    assert!(!out.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 2); // wav + its manifest
}

#[test]
fn conflicting_flags_are_rejected() {
    let dir = TempDir::new().unwrap();
    let wav = synth_vowel(&dir);
    for (method, flag, value) in [("lpc", "--alpha", "0.5"), ("rls", "--alpha", "0.5"), ("lms", "--lambda", "0.9")] {
        let res = fmtrack(&["track", "--input", path_str(&wav), "--method", method, flag, value]);
        assert_eq!(res.status.code(), Some(1));
        let err = String::from_utf8_lossy(&res.stderr);
        assert!(err.contains("cannot be used with --method"), "{err}");
    }
    let res = fmtrack(&["track", "--input", path_str(&wav)]);
    assert!(String::from_utf8_lossy(&res.stderr).contains("--method is required"));
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = TempDir::new().unwrap();
    let wav = synth_vowel(&dir);
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"track": {"method": "rls", "lambda": 0.95, "order": 6, "nformants": 2}}"#).unwrap();
    let out = dir.path().join("t.csv");
    ok(&[
        "--config", path_str(&cfg), "track", "--input", path_str(&wav), "--order", "8", "--output", path_str(&out),
    ]);
    let m = manifest(&out);
    let track = &m["params"]["track"];
    assert_eq!(track["order"], 8);
    assert_eq!(track["n_formants"], 2);
    assert_eq!(track["method"]["Adaptive"]["lambda"], 0.95);
    assert_eq!(track["decimate"], 64);

    fs::write(&cfg, r#"{"track": {"lamda": 0.95}}"#).unwrap();
    let res = fmtrack(&["--config", path_str(&cfg), "track", "--input", path_str(&wav), "--method", "rls"]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn lpc_track_json_and_lpc_coefficients() {
    let dir = TempDir::new().unwrap();
    let wav = synth_vowel(&dir);
    let out = dir.path().join("lpc.json");
    ok(&["track", "--input", path_str(&wav), "--method", "lpc", "--output", path_str(&out)]);
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 99);
    assert!((entries[0]["time_s"].as_f64().unwrap() - 0.01).abs() < 1e-12);

    let coeffs = dir.path().join("coeffs.csv");
    ok(&["lpc", "--input", path_str(&wav), "--order", "4", "--output", path_str(&coeffs)]);
    let (header, rows) = read_csv(&coeffs);
    assert_eq!(header, ["frame_time_s", "sigma2", "a_1", "a_2", "a_3", "a_4"]);
    assert_eq!(rows.len(), 99);
}

#[test]
fn analyze_reproduces_tabulated_eigenvalues() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("eig.csv");
    ok(&[
        "analyze", "--r", "360.54,268.05,137.39,68.63,11.05,-57.60,-78.29,-89.97,-146.76,-177.18,-149.36", "--output",
        path_str(&out),
    ]);
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["i", "r", "eigenvalue"]);
    let table = [1428.2, 1136.3, 433.6, 380.3, 187.6, 152.8, 152.1, 55.7, 14.1, 12.8, 12.4];
    for (row, v) in rows.iter().zip(table) {
        assert!((cell(row, 2).unwrap() - v).abs() <= 0.1, "{row:?} vs {v}");
    }
    let spread = manifest(&out)["summary"]["eigenvalue_spread"].as_f64().unwrap();
    assert!((spread - 1428.2 / 12.4).abs() < 1.0);
}

#[test]
fn analyze_identity_and_sinusoid() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("id.csv");
    ok(&["analyze", "--r", "1,0", "--output", path_str(&out)]);
    let (_, rows) = read_csv(&out);
    assert_eq!(cell(&rows[0], 2), Some(1.0));
    assert_eq!(cell(&rows[1], 2), Some(1.0));
    assert_eq!(manifest(&out)["summary"]["eigenvalue_spread"], 1.0);

    let omega = PI / 9.0;
    let tone: Vec<f64> = (0..8000).map(|n| (10000.0 * (omega * n as f64).cos()).round()).collect();
    let wav = dir.path().join("tone.wav");
    write_wav(&Signal::new(tone, 8000.0).unwrap(), &wav).unwrap();
    let out = dir.path().join("tone.csv");
    let res = ok(&["analyze", "--input", path_str(&wav), "--lags", "1", "--output", path_str(&out)]);
    let spread = manifest(&out)["summary"]["eigenvalue_spread"].as_f64().unwrap();
    let expect = (1.0 + omega.cos()) / (1.0 - omega.cos());
    assert!((spread - expect).abs() / expect < 0.02, "{spread} vs {expect}");
    assert!(String::from_utf8_lossy(&res.stderr).contains("eigenvalue spread"));

    let res = fmtrack(&["analyze", "--input", path_str(&wav), "--lags", "8000"]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn converge_rls_crosses_threshold_first() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("conv.csv");
    ok(&["converge", "--omega", "pi/9", "--alpha", "0.5", "--lambda", "0.8", "--output", path_str(&out)]);
    let (header, rows) = read_csv(&out);
    assert_eq!(
        header,
        ["n", "lms_abs_error", "rls_abs_error", "lms_w_0", "lms_w_1", "rls_w_0", "rls_w_1"]
    );
    let first_below = |col: usize| rows.iter().position(|r| cell(r, col).unwrap() < 1e-2).unwrap();
    assert!(first_below(2) < first_below(1));
    let last = rows.last().unwrap();
    assert!((cell(last, 5).unwrap() - 2.0 * (PI / 9.0).cos()).abs() < 1e-3);
    assert!((cell(last, 6).unwrap() + 1.0).abs() < 1e-3);
    let m = manifest(&out);
    assert!(m["summary"]["rls_iterations"].as_u64().unwrap() < m["summary"]["lms_iterations"].as_u64().unwrap());
}

#[test]
fn surface_minimum_at_wiener_point() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("surf.csv");
    ok(&["surface", "--omega", "pi/9", "--output", path_str(&out)]);
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["w0", "w1", "J"]);
    let best = rows
        .iter()
        .min_by(|a, b| cell(a, 2).unwrap().total_cmp(&cell(b, 2).unwrap()))
        .unwrap();
    assert!((cell(best, 0).unwrap() - 2.0 * (PI / 9.0).cos()).abs() <= 0.05);
    assert!((cell(best, 1).unwrap() + 1.0).abs() <= 0.05);
    let w = &manifest(&out)["summary"]["wiener_solution"];
    assert!((w[1].as_f64().unwrap() + 1.0).abs() < 1e-9);
}

#[test]
fn spectrogram_tone_ridge() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("spec.csv");
    ok(&["spectrogram", "--preset", "broadband", "--tone-hz", "1000", "--db", "--output", path_str(&out)]);
    let (header, rows) = read_csv(&out);
    assert_eq!(header[0], "freq_hz");
    assert_eq!(rows.len(), 513);
    for col in 1..header.len() {
        let peak = rows
            .iter()
            .max_by(|a, b| cell(a, col).unwrap().total_cmp(&cell(b, col).unwrap()))
            .unwrap();
        assert_eq!(cell(peak, 0), Some(1000.0));
    }
    assert!(rows.iter().flat_map(|r| &r[1..]).all(|v| v.parse::<f64>().unwrap() >= -120.0));
}

#[test]
fn complexity_table_and_json() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("cx.json");
    let res = ok(&["complexity", "--output", path_str(&out)]);
    let table = String::from_utf8_lossy(&res.stdout);
    assert!(table.contains("Levinson-Durbin") && table.contains("52"), "{table}");
    let report: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let lms = &report["rows"][0];
    assert_eq!(lms["algorithm"], "LMS");
    assert_eq!(lms["ratio_to_lms"], 1.0);
    assert!(report["rows"][2]["ratio_to_lms"].as_f64().unwrap() >= 10.0);
}

#[test]
fn bad_inputs_fail_cleanly() {
    let dir = TempDir::new().unwrap();
    let junk = dir.path().join("junk.wav");
    fs::write(&junk, b"not a wave file").unwrap();
    let res = fmtrack(&["track", "--input", path_str(&junk), "--method", "lpc"]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("RIFF"));

    let res = fmtrack(&["surface", "--omega", "pi/zero"]);
    assert_eq!(res.status.code(), Some(1));
    let res = fmtrack(&["track", "--method", "nope"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn sequential_flag_gives_identical_output() {
    let dir = TempDir::new().unwrap();
    let wav = synth_vowel(&dir);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    ok(&["track", "--input", path_str(&wav), "--method", "lpc", "--output", path_str(&a)]);
    ok(&["--sequential", "track", "--input", path_str(&wav), "--method", "lpc", "--output", path_str(&b)]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}
