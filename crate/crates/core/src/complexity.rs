//! Arithmetic operation accounting.
//!
//! The estimators are generic over an [`OpCounter`]; passing [`NoCount`]
//! compiles the bookkeeping away, passing an [`OpCount`] tallies every
//! multiply, add/subtract and divide performed by the algorithm itself.

use std::fmt;
use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use crate::adaptive::{run_predictor_counted, PredictorConfig};
use crate::lpc::{lpc_analyze_counted, FrameConfig};
use crate::{Result, Signal};

pub trait OpCounter {
    fn mul(&mut self, n: u64);
    fn add(&mut self, n: u64);
    fn div(&mut self, n: u64);
}

/// Discards all counts.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoCount;

impl OpCounter for NoCount {
    #[inline(always)]
    fn mul(&mut self, _: u64) {}
    #[inline(always)]
    fn add(&mut self, _: u64) {}
    #[inline(always)]
    fn div(&mut self, _: u64) {}
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCount {
    pub mults: u64,
    pub adds: u64,
    pub divs: u64,
}

impl OpCount {
    pub fn total(&self) -> u64 {
        self.mults + self.adds + self.divs
    }
}

impl OpCounter for OpCount {
    #[inline]
    fn mul(&mut self, n: u64) {
        self.mults += n;
    }
    #[inline]
    fn add(&mut self, n: u64) {
        self.adds += n;
    }
    #[inline]
    fn div(&mut self, n: u64) {
        self.divs += n;
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, rhs: Self) {
        self.mults += rhs.mults;
        self.adds += rhs.adds;
        self.divs += rhs.divs;
    }
}

/// Ratios reported for Matlab `flops` on the original recording
/// (LMS, Levinson-Durbin, RLS). Printed for reference only; the counting
/// basis here is different.
pub const REFERENCE_FLOPS_RATIOS: [(&str, f64); 3] = [("LMS", 1.0), ("Levinson-Durbin", 21.0), ("RLS", 52.0)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityRow {
    pub algorithm: String,
    pub ops: OpCount,
    pub ops_per_sample: f64,
    pub ratio_to_lms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub order: usize,
    pub n_samples: usize,
    pub rows: Vec<ComplexityRow>,
}

impl ComplexityReport {
    pub fn row(&self, algorithm: &str) -> Option<&ComplexityRow> {
        self.rows.iter().find(|r| r.algorithm == algorithm)
    }
}

impl fmt::Display for ComplexityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Computational complexity (order P = {}, {} samples)",
            self.order, self.n_samples
        )?;
        writeln!(
            f,
            "{:<18} {:>12} {:>12} {:>8} {:>12} {:>10}",
            "Algorithm", "mults", "adds", "divs", "total", "vs LMS"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<18} {:>12} {:>12} {:>8} {:>12} {:>10.2}",
                r.algorithm,
                r.ops.mults,
                r.ops.adds,
                r.ops.divs,
                r.ops.total(),
                r.ratio_to_lms
            )?;
        }
        write!(f, "Reference (Matlab flops, original recording):")?;
        for (name, ratio) in REFERENCE_FLOPS_RATIOS {
            write!(f, " {name} {ratio}")?;
        }
        writeln!(f)
    }
}

/// Runs LMS, block Levinson-Durbin LPC and RLS on the same signal with
/// counting enabled. Only model estimation is counted (prediction updates,
/// windowing, autocorrelation and the recursion); the shared formant stage
/// is identical for all three and is left out.
pub fn complexity_report(
    signal: &Signal,
    order: usize,
    lms: PredictorConfig,
    rls: PredictorConfig,
    frames: &FrameConfig,
) -> Result<ComplexityReport> {
    let n_samples = signal.len();
    let (_, lms_ops) = run_predictor_counted(signal, &lms, order, usize::MAX)?;
    let (_, lpc_ops) = lpc_analyze_counted(signal, frames, order)?;
    let (_, rls_ops) = run_predictor_counted(signal, &rls, order, usize::MAX)?;

    let base = lms_ops.total().max(1) as f64;
    let rows = [("LMS", lms_ops), ("Levinson-Durbin", lpc_ops), ("RLS", rls_ops)]
        .into_iter()
        .map(|(name, ops)| ComplexityRow {
            algorithm: name.to_string(),
            ops,
            ops_per_sample: ops.total() as f64 / n_samples as f64,
            ratio_to_lms: ops.total() as f64 / base,
        })
        .collect();
    Ok(ComplexityReport {
        order,
        n_samples,
        rows,
    })
}
