use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{apply_range_filter, formants_from_weights, FormantRanges, DEFAULT_MIN_FREQ_HZ, DEFAULT_ROOT_TOLERANCE};
use crate::adaptive::{run_predictor, PredictorConfig};
use crate::exec::map_slice;
use crate::lpc::{lpc_analyze, FrameConfig};
use crate::signal::remove_dc;
use crate::{Execution, Result, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TrackMethod {
    Adaptive(PredictorConfig),
    Lpc(FrameConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackConfig {
    pub method: TrackMethod,
    pub order: usize,
    pub n_formants: usize,
    /// Snapshot spacing in samples for the adaptive methods.
    pub decimate: usize,
    pub min_freq_hz: f64,
    pub ranges: Option<FormantRanges>,
    pub root_tolerance: f64,
}

impl TrackConfig {
    pub fn new(method: TrackMethod) -> Self {
        Self {
            method,
            order: 8,
            n_formants: 3,
            decimate: 64,
            min_freq_hz: DEFAULT_MIN_FREQ_HZ,
            ranges: None,
            root_tolerance: DEFAULT_ROOT_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackEntry {
    pub sample_index: usize,
    pub time_s: f64,
    /// `None` marks a missing formant.
    pub freqs_hz: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormantTrack {
    pub sample_rate_hz: f64,
    pub n_formants: usize,
    pub entries: Vec<TrackEntry>,
}

impl FormantTrack {
    /// Columns `sample_index, time_s, f1_hz..fN_hz`; missing cells empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let mut header = vec!["sample_index".to_string(), "time_s".to_string()];
        header.extend((1..=self.n_formants).map(|i| format!("f{i}_hz")));
        wtr.write_record(&header)?;
        for e in &self.entries {
            let mut row = vec![e.sample_index.to_string(), e.time_s.to_string()];
            row.extend(e.freqs_hz.iter().map(|f| f.map(|v| v.to_string()).unwrap_or_default()));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// JSON with `null` for missing formants.
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}

/// DC removal, model estimation, then the shared root-based formant stage.
///
/// Adaptive methods yield one entry per weight snapshot (every `decimate`
/// samples, timestamp `n / fs`); LPC yields one entry per frame, stamped at
/// the frame centre, with degenerate frames as all-missing entries.
pub fn track_formants(signal: &Signal, config: &TrackConfig, exec: Execution) -> Result<FormantTrack> {
    let x = remove_dc(signal)?;
    let fs = x.sample_rate_hz();

    let models: Vec<(usize, f64, Option<Vec<f64>>)> = match &config.method {
        TrackMethod::Adaptive(pc) => run_predictor(&x, pc, config.order, config.decimate)?
            .into_iter()
            .filter_map(|r| {
                r.weights
                    .map(|w| (r.sample_index, r.sample_index as f64 / fs, Some(w)))
            })
            .collect(),
        TrackMethod::Lpc(fc) => lpc_analyze(&x, fc, config.order, exec)?
            .into_iter()
            .map(|f| {
                (
                    f.center_sample.floor() as usize,
                    f.time_s,
                    f.model.map(|m| m.coeffs),
                )
            })
            .collect(),
    };

    let entries = map_slice(exec, &models, |(sample_index, time_s, weights)| {
        let freqs = match weights {
            Some(w) => formants_from_weights(w, fs, config.n_formants, config.min_freq_hz, config.root_tolerance)?,
            None => vec![None; config.n_formants],
        };
        let freqs_hz = match &config.ranges {
            Some(r) => apply_range_filter(&freqs, r),
            None => freqs,
        };
        Ok(TrackEntry {
            sample_index: *sample_index,
            time_s: *time_s,
            freqs_hz,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    Ok(FormantTrack {
        sample_rate_hz: fs,
        n_formants: config.n_formants,
        entries,
    })
}
