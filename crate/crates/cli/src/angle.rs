//! Angles written as multiples of pi, e.g. `pi/9`, `2pi/3`, `-pi/4`, or as
//! plain radians.

use std::f64::consts::PI;

use anyhow::{bail, Context, Result};

pub fn parse_angle(text: &str) -> Result<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let value = match s.split_once("pi") {
        None => s.parse::<f64>().with_context(|| format!("invalid angle '{text}'"))?,
        Some((coef, rest)) => {
            let coef = coef.trim_end_matches('*');
            let k = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().with_context(|| format!("invalid multiplier in angle '{text}'"))?,
            };
            let div = match rest {
                "" => 1.0,
                r => match r.strip_prefix('/') {
                    Some(d) => d.parse::<f64>().with_context(|| format!("invalid divisor in angle '{text}'"))?,
                    None => bail!("invalid angle '{text}'"),
                },
            };
            if div == 0.0 {
                bail!("angle '{text}' divides by zero");
            }
            k * PI / div
        }
    };
    if !value.is_finite() {
        bail!("angle '{text}' is not finite");
    }
    Ok(value)
}
