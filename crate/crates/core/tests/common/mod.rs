#![allow(dead_code)]

use fmtrack_core::signal::{gen_vowel, gen_vowel_varying, Resonance, SynthVowelSpec};
use fmtrack_core::Signal;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FS: f64 = 8000.0;
pub const VOWEL_TRUTH: [f64; 3] = [500.0, 1500.0, 2500.0];

pub fn vowel_spec(duration_s: f64) -> SynthVowelSpec {
    SynthVowelSpec {
        pitch_hz: 100.0,
        formants: vec![
            Resonance::new(500.0, 60.0),
            Resonance::new(1500.0, 90.0),
            Resonance::new(2500.0, 120.0),
        ],
        duration_s,
        amplitude: 1.0,
    }
}

pub fn steady_vowel() -> Signal {
    gen_vowel(&vowel_spec(1.0), FS).unwrap()
}

/// F2 holds 1500 Hz for `hold_s`, falls linearly to 1000 Hz over `ramp_s`,
/// then holds again for `hold_s`.
pub struct F2Ramp {
    pub hold_s: f64,
    pub ramp_s: f64,
}

impl F2Ramp {
    pub fn f2_at(&self, n: usize) -> f64 {
        let t = n as f64 / FS;
        if t < self.hold_s {
            1500.0
        } else if t < self.hold_s + self.ramp_s {
            1500.0 - 500.0 * (t - self.hold_s) / self.ramp_s
        } else {
            1000.0
        }
    }

    pub fn in_ramp(&self, n: usize) -> bool {
        let t = n as f64 / FS;
        t >= self.hold_s && t < self.hold_s + self.ramp_s
    }

    pub fn signal(&self) -> Signal {
        let spec = vowel_spec(2.0 * self.hold_s + self.ramp_s);
        gen_vowel_varying(&spec, FS, |k, n| {
            if k == 1 {
                self.f2_at(n)
            } else {
                spec.formants[k].freq_hz
            }
        })
        .unwrap()
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Polynomial product of ascending- or descending-ordered coefficient lists.
pub fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Fraction of `flags` that are true.
pub fn fraction(flags: impl IntoIterator<Item = bool>) -> f64 {
    let (hit, total) = flags
        .into_iter()
        .fold((0usize, 0usize), |(h, t), f| (h + f as usize, t + 1));
    if total == 0 {
        0.0
    } else {
        hit as f64 / total as f64
    }
}

/// Prints the criterion's result line and asserts it. The line goes straight
/// to the stderr handle, which the test harness does not capture, so it shows
/// up in plain `cargo test` output for passing tests too.
#[track_caller]
pub fn report(criterion: &str, pass: bool, detail: String) {
    use std::io::Write;
    let line = format!("[{}] {criterion}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(pass, "{criterion} failed: {detail}");
}
