use serde::{Deserialize, Serialize};

use crate::complexity::{NoCount, OpCounter};
use crate::linalg::SymMatrix;
use crate::{Error, Result};

/// Conventional exponentially weighted RLS predictor state.
///
/// `inv_corr` is the inverse of
/// `Phi(n) = sum lambda^(n-i) u(i) u(i)^T + lambda^n * delta * I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RlsState {
    weights: Vec<f64>,
    inv_corr: SymMatrix,
    lambda: f64,
    delta: f64,
}

/// Initialization constant: one hundredth of the mean power of the first
/// `4 * order` samples, with the power floored at `1e-6`.
pub fn default_delta(samples: &[f64], order: usize) -> f64 {
    let head = &samples[..samples.len().min(4 * order)];
    let power = if head.is_empty() {
        0.0
    } else {
        head.iter().map(|x| x * x).sum::<f64>() / head.len() as f64
    };
    0.01 * power.max(1e-6)
}

impl RlsState {
    /// Zero weights, `inv_corr = I / delta`.
    pub fn new(order: usize, lambda: f64, delta: f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("order must be at least 1".into()));
        }
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "forgetting factor must lie in (0, 1], got {lambda}"
            )));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must be positive, got {delta}"
            )));
        }
        let inv_delta = 1.0 / delta;
        Ok(Self {
            weights: vec![0.0; order],
            inv_corr: SymMatrix::from_fn(order, |i, j| if i == j { inv_delta } else { 0.0 }),
            lambda,
            delta,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn inv_corr(&self) -> &SymMatrix {
        &self.inv_corr
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn order(&self) -> usize {
        self.weights.len()
    }

    /// Pure transition: returns the a-priori error and the updated state.
    pub fn step(&self, input: &[f64], desired: f64) -> Result<(f64, RlsState)> {
        let mut next = self.clone();
        let e = next.update(input, desired, &mut NoCount)?;
        Ok((e, next))
    }

    /// In-place update:
    ///
    /// ```text
    /// pi = P u
    /// k  = pi / (lambda + u^T pi)
    /// e  = d - w^T u
    /// w  = w + k e
    /// P  = (P - k pi^T) / lambda,  then P = (P + P^T) / 2
    /// ```
    pub fn update<C: OpCounter>(&mut self, input: &[f64], desired: f64, ops: &mut C) -> Result<f64> {
        let p = self.weights.len();
        if input.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                got: input.len(),
            });
        }
        let pu = p as u64;

        let pi = self.inv_corr.mul_vec(input)?;
        ops.mul(pu * pu);
        ops.add(pu * (pu - 1));

        let denom = self.lambda + input.iter().zip(&pi).map(|(a, b)| a * b).sum::<f64>();
        ops.mul(pu);
        ops.add(pu);
        if !denom.is_finite() || denom == 0.0 {
            return Err(Error::NonFinite("RLS gain denominator"));
        }
        let inv_denom = 1.0 / denom;
        ops.div(1);
        let gain: Vec<f64> = pi.iter().map(|v| v * inv_denom).collect();
        ops.mul(pu);

        let e = desired - self.weights.iter().zip(input).map(|(w, u)| w * u).sum::<f64>();
        ops.mul(pu);
        ops.add(pu);
        if !e.is_finite() {
            return Err(Error::NonFinite("RLS a-priori error"));
        }

        for (w, k) in self.weights.iter_mut().zip(&gain) {
            *w += k * e;
        }
        ops.mul(pu);
        ops.add(pu);

        let inv_lambda = 1.0 / self.lambda;
        ops.div(1);
        let m = self.inv_corr.data_mut();
        for i in 0..p {
            for j in 0..p {
                m[i * p + j] = (m[i * p + j] - gain[i] * pi[j]) * inv_lambda;
            }
        }
        ops.mul(2 * pu * pu);
        ops.add(pu * pu);
        for i in 0..p {
            for j in i + 1..p {
                let v = 0.5 * (m[i * p + j] + m[j * p + i]);
                m[i * p + j] = v;
                m[j * p + i] = v;
            }
        }
        ops.mul(pu * (pu - 1) / 2);
        ops.add(pu * (pu - 1) / 2);

        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("RLS inverse correlation matrix"));
        }
        Ok(e)
    }
}

/// Free-function form of [`RlsState::step`].
pub fn rls_step(state: &RlsState, input: &[f64], desired: f64) -> Result<(f64, RlsState)> {
    state.step(input, desired)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::OpCount;

    #[test]
    fn first_step_closed_form() {
        let s = RlsState::new(2, 1.0, 1e6).unwrap();
        // inv_corr = 1e-6 I here; with delta as the inverse scale the
        // gain is 1e-6 / (1 + 1e-6).
        let (e, next) = rls_step(&s, &[1.0, 0.0], 1.0).unwrap();
        assert_eq!(e, 1.0);
        assert!((next.weights()[0] - 1e-6 / (1.0 + 1e-6)).abs() < 1e-18);
        assert_eq!(next.weights()[1], 0.0);

        // inv_corr = delta^-1 I with delta^-1 = 1e6 gives 1e6 / (1 + 1e6).
        let s = RlsState::new(2, 1.0, 1e-6).unwrap();
        let (_, next) = rls_step(&s, &[1.0, 0.0], 1.0).unwrap();
        assert!((next.weights()[0] - 1e6 / (1.0 + 1e6)).abs() < 1e-12);
    }

    #[test]
    fn zero_regressor() {
        let s = RlsState::new(3, 0.8, 0.5).unwrap();
        let (e, next) = s.step(&[0.0; 3], 2.5).unwrap();
        assert_eq!(e, 2.5);
        assert_eq!(next.weights(), &[0.0; 3]);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 2.0 / 0.8 } else { 0.0 };
                assert!((next.inv_corr().get(i, j) - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn validation() {
        assert!(RlsState::new(0, 0.9, 1.0).is_err());
        assert!(RlsState::new(2, 0.0, 1.0).is_err());
        assert!(RlsState::new(2, 1.01, 1.0).is_err());
        assert!(RlsState::new(2, 0.9, 0.0).is_err());
        let s = RlsState::new(2, 0.9, 1.0).unwrap();
        assert!(matches!(
            s.step(&[1.0], 0.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn non_finite_input_is_reported() {
        let s = RlsState::new(2, 0.9, 1.0).unwrap();
        assert!(matches!(
            s.step(&[f64::INFINITY, 0.0], 1.0),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn default_delta_floor() {
        assert_eq!(default_delta(&[0.0; 40], 8), 0.01 * 1e-6);
        assert!((default_delta(&[2.0; 40], 8) - 0.04).abs() < 1e-15);
        // Only the first 4P samples count.
        let mut x = vec![1.0; 8];
        x.extend(vec![100.0; 8]);
        assert!((default_delta(&x, 2) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn operation_count_bounds() {
        for p in 1..=16usize {
            let mut s = RlsState::new(p, 0.99, 0.1).unwrap();
            let mut ops = OpCount::default();
            s.update(&vec![0.3; p], 1.0, &mut ops).unwrap();
            let p2 = (p * p) as u64;
            assert!(ops.mults >= 2 * p2);
            assert!(ops.total() <= 8 * p2 + 8 * p as u64, "P={p}: {ops:?}");
        }
    }

    #[test]
    fn stays_symmetric() {
        let mut s = RlsState::new(4, 0.95, 0.01).unwrap();
        let mut x = 0.3f64;
        let mut hist = [0.0; 4];
        for _ in 0..500 {
            x = (x * 3.7 * (1.0 - x)).clamp(1e-3, 1.0 - 1e-3);
            s.update(&hist, x, &mut NoCount).unwrap();
            hist.rotate_right(1);
            hist[0] = x;
            let m = s.inv_corr();
            let scale = m.frobenius_norm();
            for i in 0..4 {
                for j in 0..4 {
                    assert!((m.get(i, j) - m.get(j, i)).abs() <= 1e-9 * scale);
                }
            }
        }
    }
}
