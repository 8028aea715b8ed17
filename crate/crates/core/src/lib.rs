//! Formant tracking with sample-recursive LMS and RLS linear predictors and
//! block Levinson-Durbin LPC.
//!
//! All three estimators produce a prediction polynomial `1 - A(z)`; a single
//! root-based stage ([`formant`]) turns those polynomials into formant
//! frequencies so the estimators can be compared on equal footing. The
//! [`spectral`] and [`complexity`] modules hold the diagnostic instruments:
//! autocorrelation eigenvalue spread, the two-tap error surface, STFT
//! spectrograms and per-algorithm operation counts.
//!
//! Frame-, snapshot- and grid-level work can run on rayon (feature
//! `parallel`, on by default); see [`Execution`].

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod adaptive;
pub mod complexity;
mod error;
mod exec;
pub mod formant;
pub mod linalg;
pub mod lpc;
pub mod signal;
pub mod spectral;
pub mod wav;
pub mod window;

pub use error::{Error, Result};
pub use exec::Execution;
pub use signal::Signal;
