//! Parameter precedence: command-line flags, then the `--config` file, then
//! built-in defaults.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

use crate::cli::{
    AnalyzeArgs, ComplexityArgs, ConvergeArgs, LpcArgs, SpectrogramArgs, SurfaceArgs, SynthArgs, TrackArgs,
};

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub track: TrackArgs,
    pub lpc: LpcArgs,
    pub analyze: AnalyzeArgs,
    pub surface: SurfaceArgs,
    pub spectrogram: SpectrogramArgs,
    pub synth: SynthArgs,
    pub complexity: ComplexityArgs,
    pub converge: ConvergeArgs,
}

pub fn load(path: Option<&Path>) -> Result<ConfigFile> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
}

/// Field-wise fill of unset flags from a config section.
pub trait Layer {
    fn or(self, lower: Self) -> Self;
}

macro_rules! layer {
    ($ty:ty { $($opt:ident),* } { $($flag:ident),* }) => {
        impl Layer for $ty {
            fn or(self, lower: Self) -> Self {
                Self {
                    $($opt: self.$opt.or(lower.$opt),)*
                    $($flag: self.$flag || lower.$flag,)*
                }
            }
        }
    };
}

layer!(TrackArgs {
    input, method, order, nformants, alpha, lambda, delta, decimate, min_freq_hz, format, output, window_ms, hop_ms, window
} { range_filter, normalize });
layer!(LpcArgs { input, order, output, window_ms, hop_ms, window } {});
layer!(AnalyzeArgs { input, r, lags, output } { remove_dc });
layer!(SurfaceArgs { omega, power, w0, w1, step, output } {});
layer!(SpectrogramArgs { input, tone_hz, duration, sample_rate, preset, output } { db });
layer!(SynthArgs { pitch_hz, formants, duration, amplitude, sample_rate, output } {});
layer!(ComplexityArgs { input, order, alpha, lambda, delta, output, window_ms, hop_ms, window } { normalize });
layer!(ConvergeArgs { omega, amplitude, samples, order, alpha, lambda, delta, threshold, hold, output } {});
