//! Sample-by-sample forward linear predictors.
//!
//! Both filters predict `x(n)` from `u(n) = [x(n-1), ..., x(n-P)]` and their
//! weights are the prediction coefficients `a_1..a_P` of
//! `x_hat(n) = sum a_i x(n-i)`, the same convention used by [`crate::lpc`].
//!
//! The LMS update is `w' = w + alpha * e * u` (no factor of two).

mod lms;
mod rls;
mod run;

pub use lms::{lms_step, LmsState};
pub use rls::{default_delta, rls_step, RlsState};
pub use run::{
    run_predictor, run_predictor_counted, write_records_csv, PredictionRecord, PredictorConfig,
    DIVERGENCE_LIMIT,
};

/// Coefficients of `1 - A(z)` in ascending powers of `z^-1`:
/// `[1, -a_1, ..., -a_P]`.
pub fn weights_to_poly(weights: &[f64]) -> Vec<f64> {
    std::iter::once(1.0)
        .chain(weights.iter().map(|a| -a))
        .collect()
}

/// Exponentially weighted error energy `sum_{i=1..n} lambda^(n-i) e(i)^2`.
pub fn weighted_sse(errors: &[f64], lambda: f64) -> f64 {
    errors.iter().fold(0.0, |acc, e| acc * lambda + e * e)
}
