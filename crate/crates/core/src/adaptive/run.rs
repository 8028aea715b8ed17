use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{default_delta, LmsState, RlsState};
use crate::complexity::{NoCount, OpCount, OpCounter};
use crate::{Error, Result, Signal};

/// A run aborts once |e(n)| or any |w_i| exceeds this.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum PredictorConfig {
    Lms {
        alpha: f64,
    },
    Rls {
        lambda: f64,
        /// `None` selects [`default_delta`] from the signal head.
        delta: Option<f64>,
    },
}

/// One predicted sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub sample_index: usize,
    pub apriori_error: f64,
    /// Post-update weights, present every `decimate` samples.
    pub weights: Option<Vec<f64>>,
}

enum Filter {
    Lms(LmsState),
    Rls(RlsState),
}

impl Filter {
    fn update<C: OpCounter>(&mut self, u: &[f64], d: f64, ops: &mut C) -> Result<f64> {
        match self {
            Filter::Lms(s) => s.update(u, d, ops),
            Filter::Rls(s) => s.update(u, d, ops),
        }
    }

    fn weights(&self) -> &[f64] {
        match self {
            Filter::Lms(s) => s.weights(),
            Filter::Rls(s) => s.weights(),
        }
    }
}

/// Forward one-step prediction over the whole signal: `d(n) = x(n)`,
/// `u(n) = [x(n-1), ..., x(n-P)]` for `n = P..len`, starting from zero
/// weights. Every sample yields a record; weights are snapshotted when
/// `n % decimate == 0`.
pub fn run_predictor(
    signal: &Signal,
    config: &PredictorConfig,
    order: usize,
    decimate: usize,
) -> Result<Vec<PredictionRecord>> {
    run_with(signal, config, order, decimate, &mut NoCount)
}

/// [`run_predictor`] with arithmetic counting.
pub fn run_predictor_counted(
    signal: &Signal,
    config: &PredictorConfig,
    order: usize,
    decimate: usize,
) -> Result<(Vec<PredictionRecord>, OpCount)> {
    let mut ops = OpCount::default();
    let records = run_with(signal, config, order, decimate, &mut ops)?;
    Ok((records, ops))
}

fn run_with<C: OpCounter>(
    signal: &Signal,
    config: &PredictorConfig,
    order: usize,
    decimate: usize,
    ops: &mut C,
) -> Result<Vec<PredictionRecord>> {
    if order == 0 {
        return Err(Error::InvalidParameter("order must be at least 1".into()));
    }
    if decimate == 0 {
        return Err(Error::InvalidParameter("decimate must be at least 1".into()));
    }
    signal.require_len(order + 1)?;
    let x = signal.samples();

    let mut filter = match *config {
        PredictorConfig::Lms { alpha } => Filter::Lms(LmsState::new(order, alpha)?),
        PredictorConfig::Rls { lambda, delta } => {
            let delta = delta.unwrap_or_else(|| default_delta(x, order));
            Filter::Rls(RlsState::new(order, lambda, delta)?)
        }
    };

    let mut records = Vec::with_capacity(x.len() - order);
    // Regressor, newest first.
    let mut u: Vec<f64> = x[..order].iter().rev().copied().collect();
    for n in order..x.len() {
        let e = filter.update(&u, x[n], ops).map_err(|err| match err {
            Error::NonFinite(what) => Error::Diverged {
                sample: n,
                detail: format!("non-finite value in {what}"),
            },
            other => other,
        })?;
        let w = filter.weights();
        if !(e.abs() <= DIVERGENCE_LIMIT) {
            return Err(Error::Diverged {
                sample: n,
                detail: format!("|prediction error| = {:e} exceeds {DIVERGENCE_LIMIT:e}", e.abs()),
            });
        }
        if let Some(bad) = w.iter().find(|v| !(v.abs() <= DIVERGENCE_LIMIT)) {
            return Err(Error::Diverged {
                sample: n,
                detail: format!("|weight| = {:e} exceeds {DIVERGENCE_LIMIT:e}", bad.abs()),
            });
        }
        records.push(PredictionRecord {
            sample_index: n,
            apriori_error: e,
            weights: (n % decimate == 0).then(|| w.to_vec()),
        });
        u.rotate_right(1);
        u[0] = x[n];
    }
    Ok(records)
}

/// CSV with columns `n, error, w_0..w_{P-1}`, snapshot rows only.
pub fn write_records_csv<W: Write>(records: &[PredictionRecord], order: usize, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let mut header = vec!["n".to_string(), "error".to_string()];
    header.extend((0..order).map(|i| format!("w_{i}")));
    wtr.write_record(&header)?;
    for r in records {
        if let Some(w) = &r.weights {
            let mut row = vec![r.sample_index.to_string(), r.apriori_error.to_string()];
            row.extend(w.iter().map(|v| v.to_string()));
            wtr.write_record(&row)?;
        }
    }
    wtr.flush()?;
    Ok(())
}
