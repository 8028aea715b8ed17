use serde::{Deserialize, Serialize};

use crate::complexity::{NoCount, OpCounter};
use crate::{Error, Result};

/// Conventional LMS predictor state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LmsState {
    weights: Vec<f64>,
    alpha: f64,
}

impl LmsState {
    /// Zero weights of length `order`.
    pub fn new(order: usize, alpha: f64) -> Result<Self> {
        Self::with_weights(vec![0.0; order], alpha)
    }

    pub fn with_weights(weights: Vec<f64>, alpha: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("order must be at least 1".into()));
        }
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "LMS step size must be finite and non-negative, got {alpha}"
            )));
        }
        Ok(Self { weights, alpha })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.weights.len()
    }

    /// Pure transition: returns the a-priori error and the updated state.
    pub fn step(&self, input: &[f64], desired: f64) -> Result<(f64, LmsState)> {
        let mut next = self.clone();
        let e = next.update(input, desired, &mut NoCount)?;
        Ok((e, next))
    }

    /// In-place update. `e = d - w.u` uses the pre-update weights, then
    /// `w += alpha * e * u`. Costs `2P + 1` multiplies and `2P` adds.
    pub fn update<C: OpCounter>(&mut self, input: &[f64], desired: f64, ops: &mut C) -> Result<f64> {
        let p = self.weights.len();
        if input.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                got: input.len(),
            });
        }
        let prediction: f64 = self.weights.iter().zip(input).map(|(w, u)| w * u).sum();
        let e = desired - prediction;
        ops.mul(p as u64);
        ops.add(p as u64);

        let gain = self.alpha * e;
        ops.mul(1);
        for (w, u) in self.weights.iter_mut().zip(input) {
            *w += gain * u;
        }
        ops.mul(p as u64);
        ops.add(p as u64);
        Ok(e)
    }
}

/// Free-function form of [`LmsState::step`].
pub fn lms_step(state: &LmsState, input: &[f64], desired: f64) -> Result<(f64, LmsState)> {
    state.step(input, desired)
}
