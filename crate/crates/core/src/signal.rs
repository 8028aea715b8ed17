//! Sampled waveforms, DC removal and the synthetic test-signal generators.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default sample rate for synthesized speech-like signals.
pub const DEFAULT_SAMPLE_RATE_HZ: f64 = 8000.0;

/// A real-valued waveform together with its sample rate.
///
/// Samples carry whatever amplitude scale they were produced with; decoded
/// PCM stays at raw int16 scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::InvalidSampleRate(sample_rate_hz));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Multiplies every sample by `gain`.
    pub fn scaled(&self, gain: f64) -> Signal {
        Signal {
            samples: self.samples.iter().map(|x| x * gain).collect(),
            sample_rate_hz: self.sample_rate_hz,
        }
    }

    /// Scales so the largest magnitude equals 1. All-zero signals are
    /// returned unchanged.
    pub fn peak_normalized(&self) -> Signal {
        let peak = self.samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if peak > 0.0 {
            self.scaled(1.0 / peak)
        } else {
            self.clone()
        }
    }

    pub(crate) fn require_len(&self, needed: usize) -> Result<()> {
        if self.samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        if self.samples.len() < needed {
            return Err(Error::SignalTooShort {
                needed,
                got: self.samples.len(),
            });
        }
        Ok(())
    }
}

/// Subtracts the sample mean.
pub fn remove_dc(signal: &Signal) -> Result<Signal> {
    signal.require_len(1)?;
    let n = signal.len() as f64;
    let mean = signal.samples.iter().sum::<f64>() / n;
    let mut samples: Vec<f64> = signal.samples.iter().map(|x| x - mean).collect();
    // A second pass removes the rounding residue of the first mean.
    let residual = samples.iter().sum::<f64>() / n;
    samples.iter_mut().for_each(|x| *x -= residual);
    Ok(Signal {
        samples,
        sample_rate_hz: signal.sample_rate_hz,
    })
}

/// `amplitude * cos(omega * n + phase)` for `n = 0..n_samples`.
pub fn gen_sinusoid(
    amplitude: f64,
    omega: f64,
    n_samples: usize,
    phase: f64,
    sample_rate_hz: f64,
) -> Result<Signal> {
    if n_samples == 0 {
        return Err(Error::EmptySignal);
    }
    let samples = (0..n_samples)
        .map(|n| amplitude * (omega * n as f64 + phase).cos())
        .collect();
    Signal::new(samples, sample_rate_hz)
}

/// One vocal-tract resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub freq_hz: f64,
    pub bandwidth_hz: f64,
}

impl Resonance {
    pub const fn new(freq_hz: f64, bandwidth_hz: f64) -> Self {
        Self {
            freq_hz,
            bandwidth_hz,
        }
    }

    /// Pole radius `exp(-pi * bw / fs)`.
    pub fn pole_radius(&self, sample_rate_hz: f64) -> f64 {
        (-PI * self.bandwidth_hz / sample_rate_hz).exp()
    }

    /// Pole angle `2 pi f / fs` in radians per sample.
    pub fn pole_angle(&self, sample_rate_hz: f64) -> f64 {
        2.0 * PI * self.freq_hz / sample_rate_hz
    }
}

/// Parameters of an impulse-train-excited vowel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthVowelSpec {
    pub pitch_hz: f64,
    pub formants: Vec<Resonance>,
    pub duration_s: f64,
    /// Peak magnitude of the output.
    pub amplitude: f64,
}

impl SynthVowelSpec {
    fn validate(&self, sample_rate_hz: f64) -> Result<()> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::InvalidSampleRate(sample_rate_hz));
        }
        if !(self.pitch_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pitch must be positive, got {}",
                self.pitch_hz
            )));
        }
        if !(self.duration_s > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "duration must be positive, got {}",
                self.duration_s
            )));
        }
        if !(self.amplitude > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "amplitude must be positive, got {}",
                self.amplitude
            )));
        }
        let nyquist = sample_rate_hz / 2.0;
        for f in &self.formants {
            if !(f.freq_hz > 0.0 && f.freq_hz < nyquist) {
                return Err(Error::InvalidParameter(format!(
                    "formant {} Hz outside (0, {nyquist}) Hz",
                    f.freq_hz
                )));
            }
            if !(f.bandwidth_hz > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "bandwidth must be positive, got {}",
                    f.bandwidth_hz
                )));
            }
        }
        Ok(())
    }
}

/// Impulse train at the pitch period through a cascade of two-pole
/// resonators, one per formant, peak-scaled to `spec.amplitude`.
pub fn gen_vowel(spec: &SynthVowelSpec, sample_rate_hz: f64) -> Result<Signal> {
    gen_vowel_varying(spec, sample_rate_hz, |k, _| spec.formants[k].freq_hz)
}

/// Like [`gen_vowel`] but the centre frequency of formant `k` at sample `n`
/// is `freq_at(k, n)`; bandwidths stay fixed. Used for gliding formants.
pub fn gen_vowel_varying<F>(spec: &SynthVowelSpec, sample_rate_hz: f64, freq_at: F) -> Result<Signal>
where
    F: Fn(usize, usize) -> f64,
{
    spec.validate(sample_rate_hz)?;
    let n_samples = (spec.duration_s * sample_rate_hz).round() as usize;
    if n_samples == 0 {
        return Err(Error::InvalidParameter("duration rounds to zero samples".into()));
    }
    let period = ((sample_rate_hz / spec.pitch_hz).round() as usize).max(1);
    let nyquist = sample_rate_hz / 2.0;

    let mut y: Vec<f64> = (0..n_samples)
        .map(|n| if n % period == 0 { 1.0 } else { 0.0 })
        .collect();

    for (k, formant) in spec.formants.iter().enumerate() {
        let radius = formant.pole_radius(sample_rate_hz);
        let (mut y1, mut y2) = (0.0, 0.0);
        for (n, v) in y.iter_mut().enumerate() {
            let f = freq_at(k, n);
            if !(f > 0.0 && f < nyquist) {
                return Err(Error::InvalidParameter(format!(
                    "formant {k} at sample {n} is {f} Hz, outside (0, {nyquist}) Hz"
                )));
            }
            let theta = 2.0 * PI * f / sample_rate_hz;
            let out = *v + 2.0 * radius * theta.cos() * y1 - radius * radius * y2;
            y2 = y1;
            y1 = out;
            *v = out;
        }
    }

    let peak = y.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if peak > 0.0 {
        let gain = spec.amplitude / peak;
        y.iter_mut().for_each(|x| *x *= gain);
    }
    Signal::new(y, sample_rate_hz)
}
