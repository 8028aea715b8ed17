//! Command-line definitions. Every subcommand's argument struct doubles as
//! the schema of its section in the `--config` JSON file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fmtrack_core::spectral::SpectrogramPreset;
use fmtrack_core::window::WindowKind;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "fmtrack", version, about = "Formant tracking with LMS, RLS and block LPC")]
pub struct Cli {
    /// JSON file of parameter defaults, one object per subcommand
    /// (e.g. {"track": {"method": "rls", "lambda": 0.98}}). Flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Run every stage on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Track formants in a WAV file.
    Track(TrackArgs),
    /// Frame-by-frame LPC coefficients of a WAV file.
    Lpc(LpcArgs),
    /// Autocorrelation, Toeplitz eigenvalues and eigenvalue spread.
    Analyze(AnalyzeArgs),
    /// Mean-squared-error surface of a 2-tap predictor on a sinusoid.
    Surface(SurfaceArgs),
    /// Short-time Fourier magnitude of a WAV file or a test tone.
    Spectrogram(SpectrogramArgs),
    /// Write a synthetic vowel as a 16-bit WAV file.
    Synth(SynthArgs),
    /// Count the arithmetic of LMS, Levinson-Durbin LPC and RLS.
    Complexity(ComplexityArgs),
    /// LMS and RLS error curves on a noiseless sinusoid.
    Converge(ConvergeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Track(_) => "track",
            Command::Lpc(_) => "lpc",
            Command::Analyze(_) => "analyze",
            Command::Surface(_) => "surface",
            Command::Spectrogram(_) => "spectrogram",
            Command::Synth(_) => "synth",
            Command::Complexity(_) => "complexity",
            Command::Converge(_) => "converge",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Lms,
    Rls,
    Lpc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrackFormat {
    Csv,
    Json,
}

fn parse_window(s: &str) -> Result<WindowKind, String> {
    s.parse().map_err(|e: fmtrack_core::Error| e.to_string())
}

fn parse_preset(s: &str) -> Result<SpectrogramPreset, String> {
    s.parse().map_err(|e: fmtrack_core::Error| e.to_string())
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackArgs {
    /// Input WAV file (16-bit PCM mono).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Model estimator.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Prediction order P [default: 8].
    #[arg(long)]
    pub order: Option<usize>,
    /// Number of formants N [default: 3].
    #[arg(long)]
    pub nformants: Option<usize>,
    /// LMS step size [default: 0.2]. Only with --method lms.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// RLS forgetting factor [default: 0.99]. Only with --method rls.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// RLS initial regularization; inverse correlation starts at I/delta
    /// [default: 1% of the initial signal power]. Only with --method rls.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Emit adaptive estimates every this many samples [default: 64].
    #[arg(long)]
    pub decimate: Option<usize>,
    /// Analysis window length in milliseconds [default: 20].
    #[arg(long)]
    pub window_ms: Option<f64>,
    /// Frame hop in milliseconds [default: 10].
    #[arg(long)]
    pub hop_ms: Option<f64>,
    /// Window shape: hamming or rectangular [default: hamming].
    #[arg(long, value_parser = parse_window)]
    pub window: Option<WindowKind>,
    /// Lowest root frequency accepted as a formant, Hz [default: 5].
    #[arg(long)]
    pub min_freq_hz: Option<f64>,
    /// Drop F1..F3 estimates outside the typical adult ranges.
    #[arg(long)]
    pub range_filter: bool,
    /// Scale the input to unit peak before analysis.
    #[arg(long)]
    pub normalize: bool,
    /// Output format [default: json for a .json output, csv otherwise].
    #[arg(long, value_enum)]
    pub format: Option<TrackFormat>,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LpcArgs {
    /// Input WAV file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Prediction order P [default: 8].
    #[arg(long)]
    pub order: Option<usize>,
    /// Analysis window length in milliseconds [default: 20].
    #[arg(long)]
    pub window_ms: Option<f64>,
    /// Frame hop in milliseconds [default: 10].
    #[arg(long)]
    pub hop_ms: Option<f64>,
    /// Window shape: hamming or rectangular [default: hamming].
    #[arg(long, value_parser = parse_window)]
    pub window: Option<WindowKind>,
    /// Output CSV; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyzeArgs {
    /// Input WAV file.
    #[arg(long, conflicts_with = "r")]
    pub input: Option<PathBuf>,
    /// Autocorrelation values r(0),r(1),... given directly.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub r: Option<Vec<f64>>,
    /// Largest lag m; the matrix is (m+1)x(m+1) [default: 10 for a WAV
    /// input, all given values for --r].
    #[arg(long)]
    pub lags: Option<usize>,
    /// Subtract the mean of the WAV input first.
    #[arg(long)]
    pub remove_dc: bool,
    /// Output CSV; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurfaceArgs {
    /// Sinusoid frequency in radians per sample, e.g. pi/9 [default: pi/9].
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
    /// Sinusoid average power [default: 1].
    #[arg(long)]
    pub power: Option<f64>,
    /// Grid range for w0 as min,max [default: -1,4].
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    pub w0: Option<Vec<f64>>,
    /// Grid range for w1 as min,max [default: -3.5,1.5].
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    pub w1: Option<Vec<f64>>,
    /// Grid spacing [default: 0.05].
    #[arg(long)]
    pub step: Option<f64>,
    /// Output CSV; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrogramArgs {
    /// Input WAV file.
    #[arg(long, conflicts_with = "tone_hz")]
    pub input: Option<PathBuf>,
    /// Analyse a unit sine at this frequency instead of a file.
    #[arg(long)]
    pub tone_hz: Option<f64>,
    /// Test tone length in seconds [default: 1].
    #[arg(long)]
    pub duration: Option<f64>,
    /// Test tone sample rate in Hz [default: 8000].
    #[arg(long)]
    pub sample_rate: Option<f64>,
    /// broadband (64-sample window) or narrowband (256) [default: broadband].
    #[arg(long, value_parser = parse_preset)]
    pub preset: Option<SpectrogramPreset>,
    /// Write 20*log10 magnitudes floored at -120 dB.
    #[arg(long)]
    pub db: bool,
    /// Output CSV; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthArgs {
    /// Fundamental frequency in Hz [default: 100].
    #[arg(long)]
    pub pitch_hz: Option<f64>,
    /// Formants as freq:bandwidth pairs in Hz [default: 500:60,1500:90,2500:120].
    #[arg(long)]
    pub formants: Option<String>,
    /// Length in seconds [default: 1].
    #[arg(long)]
    pub duration: Option<f64>,
    /// Peak sample value [default: 16000].
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Sample rate in Hz [default: 8000].
    #[arg(long)]
    pub sample_rate: Option<f64>,
    /// Output WAV file.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComplexityArgs {
    /// Input WAV file [default: a 1 s synthetic vowel].
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Prediction order P [default: 8].
    #[arg(long)]
    pub order: Option<usize>,
    /// LMS step size [default: 0.2].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// RLS forgetting factor [default: 0.99].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// RLS initial regularization [default: 1% of the initial signal power].
    #[arg(long)]
    pub delta: Option<f64>,
    /// Analysis window length in milliseconds [default: 20].
    #[arg(long)]
    pub window_ms: Option<f64>,
    /// Frame hop in milliseconds [default: 10].
    #[arg(long)]
    pub hop_ms: Option<f64>,
    /// Window shape: hamming or rectangular [default: hamming].
    #[arg(long, value_parser = parse_window)]
    pub window: Option<WindowKind>,
    /// Scale the input to unit peak first.
    #[arg(long)]
    pub normalize: bool,
    /// JSON report file; the table always goes to stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergeArgs {
    /// Sinusoid frequency in radians per sample [default: pi/9].
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
    /// Sinusoid amplitude [default: sqrt(2), unit power].
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Number of samples [default: 500].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Prediction order P [default: 2].
    #[arg(long)]
    pub order: Option<usize>,
    /// LMS step size [default: 0.5].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// RLS forgetting factor [default: 0.8].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// RLS initial regularization [default: 1% of the initial signal power].
    #[arg(long)]
    pub delta: Option<f64>,
    /// Convergence threshold on |e| [default: 0.01].
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Samples the error must stay below the threshold [default: 50].
    #[arg(long)]
    pub hold: Option<usize>,
    /// Output CSV; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
