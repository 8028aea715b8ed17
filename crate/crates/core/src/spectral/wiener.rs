use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::exec::map_range;
use crate::linalg::SymMatrix;
use crate::{Error, Execution, Result};

/// Correlation matrix and one-step-prediction cross-correlation of a
/// sinusoid with frequency `omega` (rad/sample) and average power `power`:
/// `R = power * [[1, cos w], [cos w, 1]]`, `p = power * [cos w, cos 2w]`.
pub fn autocorr_matrix_2tap(omega: f64, power: f64) -> Result<(SymMatrix, Vec<f64>)> {
    if !(power > 0.0) {
        return Err(Error::InvalidParameter(format!("power must be positive, got {power}")));
    }
    let c1 = omega.cos();
    let r = SymMatrix::from_fn(2, |i, j| if i == j { power } else { power * c1 });
    Ok((r, vec![power * c1, power * (2.0 * omega).cos()]))
}

/// Solves `R w = p`; `R` must be positive definite.
pub fn wiener_solution(r: &SymMatrix, p: &[f64]) -> Result<Vec<f64>> {
    let w = r.cholesky_solve(p)?;
    let rw = r.mul_vec(&w)?;
    let resid = rw.iter().zip(p).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = norm(p) + r.frobenius_norm() * norm(&w);
    if !(resid <= 1e-10 * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(w)
}

/// Evenly spaced grid coordinates `min, min + step, ...` up to `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl GridAxis {
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !(self.max >= self.min) || !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::InvalidParameter(format!("invalid grid axis {self:?}")));
        }
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| self.min + i as f64 * self.step).collect())
    }
}

/// MSE surface `J(w) = r0 - 2 w^T p + w^T R w` sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGrid {
    pub w0: Vec<f64>,
    pub w1: Vec<f64>,
    /// `values[i][j] = J(w0[i], w1[j])`.
    pub values: Vec<Vec<f64>>,
}

impl SurfaceGrid {
    /// Grid point with the smallest `J`, as `(w0, w1, J)`.
    pub fn argmin(&self) -> (f64, f64, f64) {
        let mut best = (f64::NAN, f64::NAN, f64::INFINITY);
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v < best.2 {
                    best = (self.w0[i], self.w1[j], v);
                }
            }
        }
        best
    }

    /// CSV with columns `w0, w1, J`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["w0", "w1", "J"])?;
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                wtr.write_record([self.w0[i].to_string(), self.w1[j].to_string(), v.to_string()])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

pub fn error_surface(
    r0: f64,
    p: &[f64],
    r: &SymMatrix,
    w0_axis: GridAxis,
    w1_axis: GridAxis,
    exec: Execution,
) -> Result<SurfaceGrid> {
    if r.order() != 2 || p.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: if r.order() != 2 { r.order() } else { p.len() },
        });
    }
    let w0 = w0_axis.points()?;
    let w1 = w1_axis.points()?;
    let (r00, r01, r11) = (r.get(0, 0), r.get(0, 1), r.get(1, 1));
    let values = map_range(exec, w0.len(), |i| {
        let a = w0[i];
        w1.iter()
            .map(|&b| r0 - 2.0 * (a * p[0] + b * p[1]) + a * a * r00 + 2.0 * a * b * r01 + b * b * r11)
            .collect()
    });
    Ok(SurfaceGrid { w0, w1, values })
}
