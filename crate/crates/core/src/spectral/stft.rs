use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::fft::{fft_in_place, Complex64};
use crate::exec::map_range;
use crate::window::{make_window, WindowKind};
use crate::{Error, Execution, Result, Signal};

/// Floor applied when magnitudes are converted to decibels.
pub const DB_FLOOR: f64 = -120.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrogramPreset {
    /// 64-sample Blackman frames: good time resolution.
    Broadband,
    /// 256-sample Blackman frames: resolves pitch harmonics.
    Narrowband,
}

impl FromStr for SpectrogramPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "broadband" | "wideband" => Ok(Self::Broadband),
            "narrowband" => Ok(Self::Narrowband),
            other => Err(Error::InvalidParameter(format!("unknown spectrogram preset {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrogramConfig {
    pub nfft: usize,
    pub window: Vec<f64>,
    pub hop: usize,
}

impl SpectrogramConfig {
    /// Window of `window_len` samples overlapping by `round(3/4 * len)`,
    /// zero-padded to a 1024-point FFT.
    pub fn preset(preset: SpectrogramPreset) -> Self {
        let len = match preset {
            SpectrogramPreset::Broadband => 64,
            SpectrogramPreset::Narrowband => 256,
        };
        Self::with_overlap(1024, WindowKind::Blackman, len, (0.75 * len as f64).round() as usize)
            .expect("preset parameters are valid")
    }

    pub fn with_overlap(nfft: usize, kind: WindowKind, window_len: usize, overlap: usize) -> Result<Self> {
        if overlap >= window_len {
            return Err(Error::InvalidParameter(format!(
                "overlap {overlap} must be below the window length {window_len}"
            )));
        }
        let cfg = Self {
            nfft,
            window: make_window(kind, window_len)?,
            hop: window_len - overlap,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.nfft.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("nfft {} is not a power of two", self.nfft)));
        }
        if self.window.is_empty() || self.window.len() > self.nfft {
            return Err(Error::InvalidParameter(format!(
                "window length {} must be between 1 and nfft = {}",
                self.window.len(),
                self.nfft
            )));
        }
        if self.hop == 0 {
            return Err(Error::InvalidParameter("hop must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrogram {
    /// Bin centre frequencies for bins `0..=nfft/2`.
    pub freqs_hz: Vec<f64>,
    /// Frame centre times.
    pub times_s: Vec<f64>,
    /// `magnitudes[bin][frame]`.
    pub magnitudes: Vec<Vec<f64>>,
}

impl Spectrogram {
    /// Bin with the largest magnitude in `frame`.
    pub fn peak_bin(&self, frame: usize) -> usize {
        (0..self.magnitudes.len())
            .max_by(|&a, &b| self.magnitudes[a][frame].total_cmp(&self.magnitudes[b][frame]))
            .unwrap_or(0)
    }

    /// Header row of frame times, first column of bin frequencies, body of
    /// magnitudes (or dB, floored at [`DB_FLOOR`]).
    pub fn write_csv<W: Write>(&self, out: W, decibels: bool) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let mut header = vec!["freq_hz".to_string()];
        header.extend(self.times_s.iter().map(|t| t.to_string()));
        wtr.write_record(&header)?;
        for (f, row) in self.freqs_hz.iter().zip(&self.magnitudes) {
            let mut rec = vec![f.to_string()];
            rec.extend(row.iter().map(|&m| {
                let v = if decibels { (20.0 * m.log10()).max(DB_FLOOR) } else { m };
                v.to_string()
            }));
            wtr.write_record(&rec)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Short-time Fourier magnitude: each frame is windowed, zero-padded to
/// `nfft` and transformed; bins `0..=nfft/2` are kept.
pub fn stft_spectrogram(signal: &Signal, config: &SpectrogramConfig, exec: Execution) -> Result<Spectrogram> {
    config.validate()?;
    let len = config.window.len();
    signal.require_len(len)?;
    let x = signal.samples();
    let fs = signal.sample_rate_hz();
    let n_frames = (x.len() - len) / config.hop + 1;
    let n_bins = config.nfft / 2 + 1;

    let frames: Vec<Vec<f64>> = map_range(exec, n_frames, |j| {
        let start = j * config.hop;
        let mut buf = vec![Complex64::new(0.0, 0.0); config.nfft];
        for (slot, (s, w)) in buf.iter_mut().zip(x[start..start + len].iter().zip(&config.window)) {
            *slot = Complex64::new(s * w, 0.0);
        }
        fft_in_place(&mut buf).expect("nfft validated as a power of two");
        buf[..n_bins].iter().map(|c| c.norm()).collect()
    });

    let magnitudes = (0..n_bins)
        .map(|k| frames.iter().map(|f| f[k]).collect())
        .collect();
    Ok(Spectrogram {
        freqs_hz: (0..n_bins).map(|k| k as f64 * fs / config.nfft as f64).collect(),
        times_s: (0..n_frames)
            .map(|j| (j * config.hop) as f64 / fs + len as f64 / (2.0 * fs))
            .collect(),
        magnitudes,
    })
}
