//! Formant frequencies from prediction polynomials.
//!
//! This is the stage shared by every estimator: the formants of a frame are
//! the lowest `N` root frequencies of `1 - A(z)` above a small cut-off
//! (5 Hz by default). No continuity tracking, merging or bandwidth test is
//! applied; [`apply_range_filter`] is the only, optional, correction.

mod roots;
mod track;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use roots::{poly_roots, ComplexRoot, DEFAULT_ROOT_TOLERANCE};
pub use track::{track_formants, FormantTrack, TrackConfig, TrackEntry, TrackMethod};

use crate::Result;

/// Roots at or below this frequency are not formants.
pub const DEFAULT_MIN_FREQ_HZ: f64 = 5.0;

/// Frequency of each root with angle in `(min_freq, fs/2)`, ascending; the
/// first `n_formants` fill the output and missing slots are `None`.
pub fn roots_to_formants(
    roots: &[ComplexRoot],
    sample_rate_hz: f64,
    n_formants: usize,
    min_freq_hz: f64,
) -> Vec<Option<f64>> {
    let nyquist = sample_rate_hz / 2.0;
    let mut freqs: Vec<f64> = roots
        .iter()
        .map(|z| sample_rate_hz / (2.0 * PI) * z.im.atan2(z.re))
        .filter(|&f| f > min_freq_hz && f < nyquist)
        .collect();
    freqs.sort_by(f64::total_cmp);
    (0..n_formants).map(|i| freqs.get(i).copied()).collect()
}

/// Prediction weights `a_1..a_P` straight to formant slots.
pub fn formants_from_weights(
    weights: &[f64],
    sample_rate_hz: f64,
    n_formants: usize,
    min_freq_hz: f64,
    tolerance: f64,
) -> Result<Vec<Option<f64>>> {
    let poly = crate::adaptive::weights_to_poly(weights);
    let roots = poly_roots(&poly, tolerance)?;
    Ok(roots_to_formants(&roots, sample_rate_hz, n_formants, min_freq_hz))
}

/// Admissible range per formant slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormantRanges {
    pub rows: Vec<(f64, f64)>,
}

impl FormantRanges {
    /// Typical adult ranges for F1..F3 in Hz.
    pub fn typical() -> Self {
        Self {
            rows: vec![(270.0, 730.0), (840.0, 2290.0), (1690.0, 3010.0)],
        }
    }
}

impl Default for FormantRanges {
    fn default() -> Self {
        Self::typical()
    }
}

/// Drops every frequency that falls outside its slot's `[min, max]`.
/// Slots beyond the last row pass through unchanged.
pub fn apply_range_filter(freqs: &[Option<f64>], ranges: &FormantRanges) -> Vec<Option<f64>> {
    freqs
        .iter()
        .enumerate()
        .map(|(i, f)| match (f, ranges.rows.get(i)) {
            (Some(v), Some(&(lo, hi))) if *v < lo || *v > hi => None,
            _ => *f,
        })
        .collect()
}
