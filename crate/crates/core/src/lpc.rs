//! Frame-based LPC: autocorrelation method plus Levinson-Durbin recursion.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::complexity::{NoCount, OpCount, OpCounter};
use crate::exec::map_slice;
use crate::window::{make_window, WindowKind};
use crate::{Error, Execution, Result, Signal};

/// Framing parameters in samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameConfig {
    pub window_len: usize,
    pub hop: usize,
    pub window: WindowKind,
}

impl Default for FrameConfig {
    /// 20 ms Hamming window, 10 ms hop at 8 kHz.
    fn default() -> Self {
        Self {
            window_len: 160,
            hop: 80,
            window: WindowKind::Hamming,
        }
    }
}

impl FrameConfig {
    /// Window and hop given in seconds, rounded to whole samples.
    pub fn from_durations(window_s: f64, hop_s: f64, sample_rate_hz: f64, window: WindowKind) -> Result<Self> {
        let cfg = Self {
            window_len: (window_s * sample_rate_hz).round() as usize,
            hop: (hop_s * sample_rate_hz).round() as usize,
            window,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_len < 2 {
            return Err(Error::InvalidParameter(format!(
                "window length must be at least 2, got {}",
                self.window_len
            )));
        }
        if self.hop == 0 || self.hop > self.window_len {
            return Err(Error::InvalidParameter(format!(
                "hop must satisfy 1 <= hop <= window length, got {}",
                self.hop
            )));
        }
        Ok(())
    }

    /// Number of whole frames that fit into `len` samples.
    pub fn frame_count(&self, len: usize) -> usize {
        if len < self.window_len {
            0
        } else {
            (len - self.window_len) / self.hop + 1
        }
    }
}

/// Windowed frames; frame `j` covers `[j * hop, j * hop + window_len)`.
/// Trailing samples that do not fill a whole frame are dropped.
pub fn frame_signal(signal: &Signal, config: &FrameConfig) -> Result<Vec<Vec<f64>>> {
    config.validate()?;
    signal.require_len(config.window_len)?;
    let window = make_window(config.window, config.window_len)?;
    Ok((0..config.frame_count(signal.len()))
        .map(|j| windowed(signal.samples(), j * config.hop, &window, &mut NoCount))
        .collect())
}

fn windowed<C: OpCounter>(x: &[f64], start: usize, window: &[f64], ops: &mut C) -> Vec<f64> {
    ops.mul(window.len() as u64);
    x[start..start + window.len()]
        .iter()
        .zip(window)
        .map(|(a, b)| a * b)
        .collect()
}

/// Unnormalized autocorrelation `r(i) = sum_n x(n) x(n+i)` for lags
/// `0..=max_lag`.
pub fn autocorrelation(frame: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    autocorrelation_counted(frame, max_lag, &mut NoCount)
}

fn autocorrelation_counted<C: OpCounter>(frame: &[f64], max_lag: usize, ops: &mut C) -> Result<Vec<f64>> {
    if max_lag >= frame.len() {
        return Err(Error::InvalidParameter(format!(
            "max lag {max_lag} must be below the frame length {}",
            frame.len()
        )));
    }
    Ok((0..=max_lag)
        .map(|lag| {
            let terms = (frame.len() - lag) as u64;
            ops.mul(terms);
            ops.add(terms - 1);
            frame[..frame.len() - lag]
                .iter()
                .zip(&frame[lag..])
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect())
}

/// All-pole model `H(z) = sigma / (1 - A(z))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpcModel {
    /// Prediction coefficients `a_1..a_P`, `x_hat(n) = sum a_j x(n-j)`.
    pub coeffs: Vec<f64>,
    /// Reflection coefficients `k_1..k_P`.
    pub reflection: Vec<f64>,
    /// Prediction error power after each stage, `E_0..E_P`.
    pub stage_errors: Vec<f64>,
}

impl LpcModel {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Final residual power `sigma^2 = E_P`.
    pub fn error_power(&self) -> f64 {
        *self.stage_errors.last().expect("stage_errors holds E_0..E_P")
    }
}

/// Levinson-Durbin recursion on `r(0..=order)`.
pub fn levinson_durbin(r: &[f64], order: usize) -> Result<LpcModel> {
    levinson_durbin_counted(r, order, &mut NoCount)
}

fn levinson_durbin_counted<C: OpCounter>(r: &[f64], order: usize, ops: &mut C) -> Result<LpcModel> {
    if order == 0 {
        return Err(Error::InvalidParameter("order must be at least 1".into()));
    }
    if r.len() < order + 1 {
        return Err(Error::DimensionMismatch {
            expected: order + 1,
            got: r.len(),
        });
    }
    if !(r[0] > 0.0) {
        return Err(Error::DegenerateAutocorrelation(format!(
            "r(0) = {} is not positive",
            r[0]
        )));
    }

    let mut a = vec![0.0; order];
    let mut prev = vec![0.0; order];
    let mut reflection = Vec::with_capacity(order);
    let mut stage_errors = Vec::with_capacity(order + 1);
    let mut err = r[0];
    stage_errors.push(err);

    for i in 1..=order {
        if !(err > 0.0) {
            return Err(Error::DegenerateAutocorrelation(format!(
                "prediction error power E_{} = {err} is not positive",
                i - 1
            )));
        }
        let acc: f64 = (1..i).map(|j| prev[j - 1] * r[i - j]).sum();
        ops.mul(i as u64 - 1);
        ops.add(i as u64);
        let k = (r[i] - acc) / err;
        ops.div(1);

        a[i - 1] = k;
        for j in 1..i {
            a[j - 1] = prev[j - 1] - k * prev[i - j - 1];
        }
        ops.mul(i as u64 - 1);
        ops.add(i as u64 - 1);

        err *= 1.0 - k * k;
        ops.mul(2);
        ops.add(1);

        reflection.push(k);
        stage_errors.push(err);
        prev[..i].copy_from_slice(&a[..i]);
    }
    Ok(LpcModel {
        coeffs: a,
        reflection,
        stage_errors,
    })
}

/// One analysis frame. `model` is `None` for degenerate frames (silence or
/// a non-positive stage error), which show up as gaps in formant tracks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpcFrame {
    pub start_sample: usize,
    /// `start + window_len / 2`, in samples (may be fractional).
    pub center_sample: f64,
    pub time_s: f64,
    pub model: Option<LpcModel>,
}

/// Window, autocorrelation and Levinson-Durbin for every whole frame.
pub fn lpc_analyze(signal: &Signal, config: &FrameConfig, order: usize, exec: Execution) -> Result<Vec<LpcFrame>> {
    check_analysis(signal, config, order)?;
    let window = make_window(config.window, config.window_len)?;
    let starts: Vec<usize> = (0..config.frame_count(signal.len()))
        .map(|j| j * config.hop)
        .collect();
    map_slice(exec, &starts, |&start| {
        analyze_frame(signal, config, &window, order, start, &mut NoCount)
    })
    .into_iter()
    .collect()
}

/// Sequential [`lpc_analyze`] with arithmetic counting.
pub fn lpc_analyze_counted(signal: &Signal, config: &FrameConfig, order: usize) -> Result<(Vec<LpcFrame>, OpCount)> {
    check_analysis(signal, config, order)?;
    let window = make_window(config.window, config.window_len)?;
    let mut ops = OpCount::default();
    let frames = (0..config.frame_count(signal.len()))
        .map(|j| analyze_frame(signal, config, &window, order, j * config.hop, &mut ops))
        .collect::<Result<_>>()?;
    Ok((frames, ops))
}

fn check_analysis(signal: &Signal, config: &FrameConfig, order: usize) -> Result<()> {
    config.validate()?;
    signal.require_len(config.window_len)?;
    if order == 0 || order >= config.window_len {
        return Err(Error::InvalidParameter(format!(
            "order must satisfy 1 <= order < window length, got {order}"
        )));
    }
    Ok(())
}

fn analyze_frame<C: OpCounter>(
    signal: &Signal,
    config: &FrameConfig,
    window: &[f64],
    order: usize,
    start: usize,
    ops: &mut C,
) -> Result<LpcFrame> {
    let frame = windowed(signal.samples(), start, window, ops);
    let r = autocorrelation_counted(&frame, order, ops)?;
    let model = match levinson_durbin_counted(&r, order, ops) {
        Ok(m) => Some(m),
        Err(Error::DegenerateAutocorrelation(_)) => None,
        Err(e) => return Err(e),
    };
    let center_sample = start as f64 + config.window_len as f64 / 2.0;
    Ok(LpcFrame {
        start_sample: start,
        center_sample,
        time_s: center_sample / signal.sample_rate_hz(),
        model,
    })
}

/// CSV with columns `frame_time_s, sigma2, a_1..a_P`; degenerate frames
/// have empty model cells.
pub fn write_lpc_csv<W: Write>(frames: &[LpcFrame], order: usize, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let mut header = vec!["frame_time_s".to_string(), "sigma2".to_string()];
    header.extend((1..=order).map(|i| format!("a_{i}")));
    wtr.write_record(&header)?;
    for f in frames {
        let mut row = vec![f.time_s.to_string()];
        match &f.model {
            Some(m) => {
                row.push(m.error_power().to_string());
                row.extend(m.coeffs.iter().map(|v| v.to_string()));
            }
            None => row.extend(std::iter::repeat_n(String::new(), order + 1)),
        }
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}
