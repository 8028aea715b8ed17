pub use num_complex::Complex64;

use crate::{Error, Result};

/// In-place iterative radix-2 decimation-in-time FFT,
/// `X[k] = sum_n x[n] e^{-2 pi i k n / N}`.
pub fn fft_in_place(data: &mut [Complex64]) -> Result<()> {
    let n = data.len();
    if !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("FFT length {n} is not a power of two")));
    }
    if n <= 1 {
        return Ok(());
    }

    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }

    // Each twiddle is evaluated directly rather than by repeated rotation.
    let step = -2.0 * std::f64::consts::PI / n as f64;
    let twiddles: Vec<Complex64> = (0..n / 2).map(|k| Complex64::from_polar(1.0, step * k as f64)).collect();

    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let tw = twiddles[k * stride];
                let a = data[start + k];
                let b = data[start + k + half] * tw;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impulse_and_constant() {
        let mut x = vec![Complex64::new(0.0, 0.0); 8];
        x[0] = Complex64::new(1.0, 0.0);
        fft_in_place(&mut x).unwrap();
        assert!(x.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-15));

        let mut x = vec![Complex64::new(1.0, 0.0); 8];
        fft_in_place(&mut x).unwrap();
        assert!((x[0] - Complex64::new(8.0, 0.0)).norm() < 1e-14);
        assert!(x[1..].iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn rejects_non_power_of_two() {
        let mut x = vec![Complex64::new(0.0, 0.0); 6];
        assert!(fft_in_place(&mut x).is_err());
        let mut one = vec![Complex64::new(3.0, 0.0)];
        fft_in_place(&mut one).unwrap();
        assert_eq!(one[0], Complex64::new(3.0, 0.0));
    }
}
