use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use fmtrack_core::adaptive::{run_predictor, PredictionRecord, PredictorConfig};
use fmtrack_core::complexity::complexity_report;
use fmtrack_core::formant::{track_formants, FormantRanges, TrackConfig, TrackMethod};
use fmtrack_core::lpc::{autocorrelation, lpc_analyze, write_lpc_csv, FrameConfig};
use fmtrack_core::signal::{gen_sinusoid, gen_vowel, remove_dc, Resonance, SynthVowelSpec};
use fmtrack_core::spectral::{
    autocorr_matrix_2tap, eigenvalue_spread, error_surface, stft_spectrogram, sym_eigenvalues,
    toeplitz_from_autocorr, wiener_solution, GridAxis, SpectrogramConfig, SpectrogramPreset, DEFAULT_EIGEN_TOLERANCE,
};
use fmtrack_core::wav::{decode_wav, encode_wav};
use fmtrack_core::window::WindowKind;
use fmtrack_core::{Execution, Signal};
use serde::Serialize;
use serde_json::json;

use crate::angle::parse_angle;
use crate::cli::{
    AnalyzeArgs, ComplexityArgs, ConvergeArgs, LpcArgs, Method, SpectrogramArgs, SurfaceArgs, SynthArgs, TrackArgs,
    TrackFormat,
};
use crate::output::{read_hashed, write_atomic, write_output, InputRecord, RunManifest};

const DEFAULT_ORDER: usize = 8;
const DEFAULT_ALPHA: f64 = 0.2;
const DEFAULT_LAMBDA: f64 = 0.99;
const DEFAULT_NFORMANTS: usize = 3;
const DEFAULT_DECIMATE: usize = 64;

fn execution_name(exec: Execution) -> &'static str {
    if exec.is_parallel() {
        "parallel"
    } else {
        "sequential"
    }
}

fn load_wav(path: &Path) -> Result<(Signal, InputRecord)> {
    let (bytes, record) = read_hashed(path)?;
    let signal = decode_wav(&bytes).with_context(|| format!("cannot decode {}", path.display()))?;
    Ok((signal, record))
}

fn require_input(input: Option<PathBuf>) -> Result<PathBuf> {
    input.ok_or_else(|| anyhow!("--input is required"))
}

fn frame_config(window_ms: Option<f64>, hop_ms: Option<f64>, window: Option<WindowKind>, fs: f64) -> Result<FrameConfig> {
    let cfg = FrameConfig::from_durations(
        window_ms.unwrap_or(20.0) / 1000.0,
        hop_ms.unwrap_or(10.0) / 1000.0,
        fs,
        window.unwrap_or(WindowKind::Hamming),
    )?;
    Ok(cfg)
}

fn finish(
    manifest: &mut RunManifest,
    output: Option<&Path>,
    inputs: Vec<InputRecord>,
    summary: serde_json::Value,
) -> Result<()> {
    manifest.inputs = inputs;
    manifest.outputs = output.map(|p| vec![p.to_path_buf()]).unwrap_or_default();
    manifest.summary = summary;
    manifest.write_beside(output)
}

/// Flags that only make sense for some estimators.
fn check_method_flags(method: Method, flags: &TrackArgs) -> Result<()> {
    let given = |set: bool, name: &str, allowed: &[Method]| -> Result<()> {
        if set && !allowed.contains(&method) {
            bail!("--{name} cannot be used with --method {}", method_name(method));
        }
        Ok(())
    };
    given(flags.alpha.is_some(), "alpha", &[Method::Lms])?;
    given(flags.lambda.is_some(), "lambda", &[Method::Rls])?;
    given(flags.delta.is_some(), "delta", &[Method::Rls])?;
    given(flags.decimate.is_some(), "decimate", &[Method::Lms, Method::Rls])?;
    given(flags.window_ms.is_some(), "window-ms", &[Method::Lpc])?;
    given(flags.hop_ms.is_some(), "hop-ms", &[Method::Lpc])?;
    given(flags.window.is_some(), "window", &[Method::Lpc])?;
    Ok(())
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Lms => "lms",
        Method::Rls => "rls",
        Method::Lpc => "lpc",
    }
}

#[derive(Serialize)]
struct TrackParams {
    input: PathBuf,
    track: TrackConfig,
    normalize: bool,
    format: TrackFormat,
    execution: &'static str,
}

pub fn track(flags: TrackArgs, file: TrackArgs, exec: Execution) -> Result<()> {
    use crate::config::Layer;
    let args = flags.clone().or(file);
    let method = args.method.ok_or_else(|| anyhow!("--method is required (lms, rls or lpc)"))?;
    check_method_flags(method, &flags)?;

    let input = require_input(args.input)?;
    let (mut signal, record) = load_wav(&input)?;
    if args.normalize {
        signal = signal.peak_normalized();
    }
    let fs = signal.sample_rate_hz();

    let estimator = match method {
        Method::Lms => TrackMethod::Adaptive(PredictorConfig::Lms {
            alpha: args.alpha.unwrap_or(DEFAULT_ALPHA),
        }),
        Method::Rls => TrackMethod::Adaptive(PredictorConfig::Rls {
            lambda: args.lambda.unwrap_or(DEFAULT_LAMBDA),
            delta: args.delta,
        }),
        Method::Lpc => TrackMethod::Lpc(frame_config(args.window_ms, args.hop_ms, args.window, fs)?),
    };
    let mut cfg = TrackConfig::new(estimator);
    cfg.order = args.order.unwrap_or(DEFAULT_ORDER);
    cfg.n_formants = args.nformants.unwrap_or(DEFAULT_NFORMANTS);
    cfg.decimate = args.decimate.unwrap_or(DEFAULT_DECIMATE);
    if let Some(f) = args.min_freq_hz {
        cfg.min_freq_hz = f;
    }
    if args.range_filter {
        cfg.ranges = Some(FormantRanges::typical());
    }
    if cfg.order == 0 || cfg.n_formants == 0 {
        bail!("--order and --nformants must be at least 1");
    }

    let format = args.format.unwrap_or_else(|| match args.output.as_deref().and_then(Path::extension) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => TrackFormat::Json,
        _ => TrackFormat::Csv,
    });

    let track = track_formants(&signal, &cfg, exec)?;
    let output = args.output.as_deref();
    write_output(output, |w| {
        match format {
            TrackFormat::Csv => track.write_csv(w)?,
            TrackFormat::Json => track.write_json(w)?,
        }
        Ok(())
    })?;

    let missing = track.entries.iter().flat_map(|e| &e.freqs_hz).filter(|f| f.is_none()).count();
    let mut manifest = RunManifest::new(
        "track",
        TrackParams {
            input,
            track: cfg,
            normalize: args.normalize,
            format,
            execution: execution_name(exec),
        },
    )?;
    finish(
        &mut manifest,
        output,
        vec![record],
        json!({ "entries": track.entries.len(), "missing_values": missing }),
    )
}

pub fn lpc(args: LpcArgs, exec: Execution) -> Result<()> {
    let input = require_input(args.input)?;
    let (signal, record) = load_wav(&input)?;
    let frames = frame_config(args.window_ms, args.hop_ms, args.window, signal.sample_rate_hz())?;
    let order = args.order.unwrap_or(DEFAULT_ORDER);
    let signal = remove_dc(&signal)?;
    let models = lpc_analyze(&signal, &frames, order, exec)?;
    let output = args.output.as_deref();
    write_output(output, |w| Ok(write_lpc_csv(&models, order, w)?))?;

    let gaps = models.iter().filter(|f| f.model.is_none()).count();
    let mut manifest = RunManifest::new(
        "lpc",
        json!({ "input": input, "order": order, "frames": frames, "execution": execution_name(exec) }),
    )?;
    finish(&mut manifest, output, vec![record], json!({ "frames": models.len(), "degenerate_frames": gaps }))
}

pub fn analyze(args: AnalyzeArgs) -> Result<()> {
    let (r, inputs, source) = match (&args.r, &args.input) {
        (Some(values), None) => {
            if values.is_empty() {
                bail!("--r needs at least one value");
            }
            let m = args.lags.unwrap_or(values.len() - 1);
            if m >= values.len() {
                bail!("--lags {m} needs {} autocorrelation values, got {}", m + 1, values.len());
            }
            (values[..=m].to_vec(), Vec::new(), json!({ "r": values }))
        }
        (None, Some(path)) => {
            let (mut signal, record) = load_wav(path)?;
            if args.remove_dc {
                signal = remove_dc(&signal)?;
            }
            let m = args.lags.unwrap_or(10);
            if m >= signal.len() {
                bail!("--lags {m} must be below the signal length {}", signal.len());
            }
            // Biased estimate normalised by the signal length.
            let n = signal.len() as f64;
            let r: Vec<f64> = autocorrelation(signal.samples(), m)?.iter().map(|v| v / n).collect();
            (r, vec![record], json!({ "input": path, "remove_dc": args.remove_dc }))
        }
        (None, None) => bail!("give either --input or --r"),
        (Some(_), Some(_)) => bail!("--input and --r are mutually exclusive"),
    };

    let matrix = toeplitz_from_autocorr(&r)?;
    let eig = sym_eigenvalues(&matrix, DEFAULT_EIGEN_TOLERANCE)?;
    let spread = eigenvalue_spread(&eig);

    let output = args.output.as_deref();
    write_output(output, |w| {
        writeln!(w, "i,r,eigenvalue")?;
        for (i, (ri, vi)) in r.iter().zip(&eig).enumerate() {
            writeln!(w, "{i},{ri},{vi}")?;
        }
        Ok(())
    })?;
    eprintln!("eigenvalue spread (max/min): {spread}");

    let mut manifest = RunManifest::new("analyze", json!({ "source": source, "lags": r.len() - 1 }))?;
    finish(
        &mut manifest,
        output,
        inputs,
        json!({ "eigenvalue_spread": spread, "trace": matrix.trace() }),
    )
}

fn range_pair(v: Option<Vec<f64>>, default: [f64; 2], name: &str) -> Result<(f64, f64)> {
    match v {
        None => Ok((default[0], default[1])),
        Some(v) if v.len() == 2 => Ok((v[0], v[1])),
        Some(_) => bail!("--{name} takes exactly two values: min,max"),
    }
}

pub fn surface(args: SurfaceArgs, exec: Execution) -> Result<()> {
    let omega_text = args.omega.unwrap_or_else(|| "pi/9".into());
    let omega = parse_angle(&omega_text)?;
    let power = args.power.unwrap_or(1.0);
    let step = args.step.unwrap_or(0.05);
    let (w0_min, w0_max) = range_pair(args.w0, [-1.0, 4.0], "w0")?;
    let (w1_min, w1_max) = range_pair(args.w1, [-3.5, 1.5], "w1")?;
    let axis0 = GridAxis { min: w0_min, max: w0_max, step };
    let axis1 = GridAxis { min: w1_min, max: w1_max, step };

    let (r, p) = autocorr_matrix_2tap(omega, power)?;
    let grid = error_surface(power, &p, &r, axis0, axis1, exec)?;
    let output = args.output.as_deref();
    write_output(output, |w| Ok(grid.write_csv(w)?))?;

    let wiener = wiener_solution(&r, &p).ok();
    let (g0, g1, gj) = grid.argmin();
    match &wiener {
        Some(w) => eprintln!("Wiener solution: [{}, {}]", w[0], w[1]),
        None => eprintln!("Wiener solution: correlation matrix is singular"),
    }
    eprintln!("grid minimum J = {gj} at ({g0}, {g1})");

    let mut manifest = RunManifest::new(
        "surface",
        json!({
            "omega": omega_text, "omega_rad": omega, "power": power,
            "w0": axis0, "w1": axis1, "execution": execution_name(exec),
        }),
    )?;
    finish(
        &mut manifest,
        output,
        Vec::new(),
        json!({ "wiener_solution": wiener, "grid_minimum": { "w0": g0, "w1": g1, "J": gj } }),
    )
}

pub fn spectrogram(args: SpectrogramArgs, exec: Execution) -> Result<()> {
    let (signal, inputs, source) = match (args.input, args.tone_hz) {
        (Some(path), None) => {
            let (s, rec) = load_wav(&path)?;
            (s, vec![rec], json!({ "input": path }))
        }
        (None, Some(f)) => {
            let fs = args.sample_rate.unwrap_or(8000.0);
            let duration = args.duration.unwrap_or(1.0);
            if !(f > 0.0 && f < fs / 2.0) {
                bail!("--tone-hz must lie in (0, {}) Hz", fs / 2.0);
            }
            let n = (duration * fs).round();
            if n.is_nan() || n < 1.0 {
                bail!("--duration must give at least one sample");
            }
            let s = gen_sinusoid(1.0, 2.0 * PI * f / fs, n as usize, -PI / 2.0, fs)?;
            (s, Vec::new(), json!({ "tone_hz": f, "duration_s": duration, "sample_rate_hz": fs }))
        }
        (None, None) => bail!("give either --input or --tone-hz"),
        (Some(_), Some(_)) => bail!("--input and --tone-hz are mutually exclusive"),
    };
    let preset = args.preset.unwrap_or(SpectrogramPreset::Broadband);
    let cfg = SpectrogramConfig::preset(preset);
    let spec = stft_spectrogram(&signal, &cfg, exec)?;
    let output = args.output.as_deref();
    write_output(output, |w| Ok(spec.write_csv(w, args.db)?))?;

    let mut manifest = RunManifest::new(
        "spectrogram",
        json!({
            "source": source, "preset": preset, "nfft": cfg.nfft, "window_len": cfg.window.len(),
            "hop": cfg.hop, "db": args.db, "execution": execution_name(exec),
        }),
    )?;
    finish(
        &mut manifest,
        output,
        inputs,
        json!({ "bins": spec.freqs_hz.len(), "frames": spec.times_s.len() }),
    )
}

fn parse_formants(text: &str) -> Result<Vec<Resonance>> {
    text.split(',')
        .map(|pair| {
            let (f, bw) = pair
                .split_once(':')
                .ok_or_else(|| anyhow!("formant '{pair}' is not freq:bandwidth"))?;
            let f = f.trim().parse().with_context(|| format!("bad frequency in '{pair}'"))?;
            let bw = bw.trim().parse().with_context(|| format!("bad bandwidth in '{pair}'"))?;
            Ok(Resonance::new(f, bw))
        })
        .collect()
}

pub fn synth(args: SynthArgs) -> Result<()> {
    let output = args.output.ok_or_else(|| anyhow!("--output is required"))?;
    let spec = SynthVowelSpec {
        pitch_hz: args.pitch_hz.unwrap_or(100.0),
        formants: parse_formants(args.formants.as_deref().unwrap_or("500:60,1500:90,2500:120"))?,
        duration_s: args.duration.unwrap_or(1.0),
        amplitude: args.amplitude.unwrap_or(16000.0),
    };
    let fs = args.sample_rate.unwrap_or(8000.0);
    let signal = gen_vowel(&spec, fs)?;
    let bytes = encode_wav(&signal)?;
    write_atomic(&output, |w| Ok(w.write_all(&bytes)?))?;

    let mut manifest = RunManifest::new("synth", json!({ "vowel": spec, "sample_rate_hz": fs }))?;
    finish(&mut manifest, Some(&output), Vec::new(), json!({ "samples": signal.len() }))
}

pub fn complexity(args: ComplexityArgs) -> Result<()> {
    let (mut signal, inputs) = match &args.input {
        Some(path) => {
            let (s, rec) = load_wav(path)?;
            (s, vec![rec])
        }
        None => {
            let spec = SynthVowelSpec {
                pitch_hz: 100.0,
                formants: vec![
                    Resonance::new(500.0, 60.0),
                    Resonance::new(1500.0, 90.0),
                    Resonance::new(2500.0, 120.0),
                ],
                duration_s: 1.0,
                amplitude: 1.0,
            };
            (gen_vowel(&spec, 8000.0)?, Vec::new())
        }
    };
    if args.normalize {
        signal = signal.peak_normalized();
    }
    let signal = remove_dc(&signal)?;
    let order = args.order.unwrap_or(DEFAULT_ORDER);
    let lms = PredictorConfig::Lms {
        alpha: args.alpha.unwrap_or(DEFAULT_ALPHA),
    };
    let rls = PredictorConfig::Rls {
        lambda: args.lambda.unwrap_or(DEFAULT_LAMBDA),
        delta: args.delta,
    };
    let frames = frame_config(args.window_ms, args.hop_ms, args.window, signal.sample_rate_hz())?;
    let report = complexity_report(&signal, order, lms, rls, &frames)?;
    print!("{report}");

    let output = args.output.as_deref();
    if let Some(path) = output {
        write_atomic(path, |w| {
            serde_json::to_writer_pretty(&mut *w, &report)?;
            writeln!(w)?;
            Ok(())
        })?;
    }
    let mut manifest = RunManifest::new(
        "complexity",
        json!({
            "input": args.input, "order": order, "lms": lms, "rls": rls,
            "frames": frames, "normalize": args.normalize,
        }),
    )?;
    finish(&mut manifest, output, inputs, serde_json::Value::Null)
}

/// Index of the first record after which `|e|` stays below `threshold` for
/// `hold` consecutive samples.
fn iterations_to_threshold(records: &[PredictionRecord], threshold: f64, hold: usize) -> Option<usize> {
    let mut run = 0;
    for (i, r) in records.iter().enumerate() {
        if r.apriori_error.abs() < threshold {
            run += 1;
            if run >= hold {
                return Some(i + 1 - run);
            }
        } else {
            run = 0;
        }
    }
    None
}

pub fn converge(args: ConvergeArgs) -> Result<()> {
    let omega_text = args.omega.unwrap_or_else(|| "pi/9".into());
    let omega = parse_angle(&omega_text)?;
    let amplitude = args.amplitude.unwrap_or(2f64.sqrt());
    let samples = args.samples.unwrap_or(500);
    let order = args.order.unwrap_or(2);
    let threshold = args.threshold.unwrap_or(1e-2);
    let hold = args.hold.unwrap_or(50).max(1);
    let lms = PredictorConfig::Lms {
        alpha: args.alpha.unwrap_or(0.5),
    };
    let rls = PredictorConfig::Rls {
        lambda: args.lambda.unwrap_or(0.8),
        delta: args.delta,
    };

    let x = gen_sinusoid(amplitude, omega, samples, 0.0, 1.0)?;
    let lms_run = run_predictor(&x, &lms, order, 1).context("LMS run")?;
    let rls_run = run_predictor(&x, &rls, order, 1).context("RLS run")?;

    let output = args.output.as_deref();
    write_output(output, |w| {
        let mut header = vec!["n".to_string(), "lms_abs_error".into(), "rls_abs_error".into()];
        header.extend((0..order).map(|i| format!("lms_w_{i}")));
        header.extend((0..order).map(|i| format!("rls_w_{i}")));
        writeln!(w, "{}", header.join(","))?;
        for (a, b) in lms_run.iter().zip(&rls_run) {
            let mut row = vec![
                a.sample_index.to_string(),
                a.apriori_error.abs().to_string(),
                b.apriori_error.abs().to_string(),
            ];
            for rec in [a, b] {
                row.extend(rec.weights.iter().flatten().map(|v| v.to_string()));
            }
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    })?;

    let lms_iters = iterations_to_threshold(&lms_run, threshold, hold);
    let rls_iters = iterations_to_threshold(&rls_run, threshold, hold);
    let show = |v: Option<usize>| v.map_or("not reached".to_string(), |n| n.to_string());
    eprintln!(
        "iterations to |e| < {threshold} held for {hold} samples: LMS {}, RLS {}",
        show(lms_iters),
        show(rls_iters)
    );

    let mut manifest = RunManifest::new(
        "converge",
        json!({
            "omega": omega_text, "omega_rad": omega, "amplitude": amplitude, "samples": samples,
            "order": order, "lms": lms, "rls": rls, "threshold": threshold, "hold": hold,
        }),
    )?;
    finish(
        &mut manifest,
        output,
        Vec::new(),
        json!({ "lms_iterations": lms_iters, "rls_iterations": rls_iters }),
    )
}
