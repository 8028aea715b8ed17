//! Symmetric analysis windows (`len - 1` denominator, as in Matlab's
//! `hamming`/`blackman`).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Rectangular,
    Hamming,
    Blackman,
}

impl fmt::Display for WindowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WindowKind::Rectangular => "rectangular",
            WindowKind::Hamming => "hamming",
            WindowKind::Blackman => "blackman",
        })
    }
}

impl FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rectangular" | "rect" | "boxcar" => Ok(WindowKind::Rectangular),
            "hamming" => Ok(WindowKind::Hamming),
            "blackman" => Ok(WindowKind::Blackman),
            other => Err(Error::InvalidParameter(format!("unknown window {other:?}"))),
        }
    }
}

pub fn make_window(kind: WindowKind, len: usize) -> Result<Vec<f64>> {
    if len < 2 {
        return Err(Error::InvalidParameter(format!(
            "window length must be at least 2, got {len}"
        )));
    }
    let denom = (len - 1) as f64;
    let value = |n: usize| -> f64 {
        let t = 2.0 * PI * n as f64 / denom;
        match kind {
            WindowKind::Rectangular => 1.0,
            WindowKind::Hamming => 0.54 - 0.46 * t.cos(),
            WindowKind::Blackman => 0.42 - 0.5 * t.cos() + 0.08 * (2.0 * t).cos(),
        }
    };
    // Evaluate the first half and mirror it so symmetry is exact.
    let mut w = vec![0.0; len];
    for n in 0..len.div_ceil(2) {
        let v = value(n);
        w[n] = v;
        w[len - 1 - n] = v;
    }
    Ok(w)
}
