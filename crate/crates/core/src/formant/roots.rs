use num_complex::Complex64;

use crate::{Error, Result};

/// Default residual tolerance for [`poly_roots`].
pub const DEFAULT_ROOT_TOLERANCE: f64 = 1e-8;

const MAX_ITERATIONS: usize = 500;

/// A polynomial root.
pub type ComplexRoot = Complex64;

/// All complex roots of a real polynomial given in descending powers
/// (`coeffs[0]` multiplies the highest power). A prediction polynomial
/// `[1, -a_1, ..., -a_P]` in powers of `z^-1` is passed unchanged: it is
/// `z^P - a_1 z^(P-1) - ... - a_P` in descending powers of `z`.
///
/// Uses Aberth-Ehrlich simultaneous iteration followed by a Newton polish.
/// Every returned root satisfies
/// `|p(z)| <= tolerance * sum_i |c_i| |z|^(deg - i)`; complex roots are
/// returned as exact conjugate pairs.
pub fn poly_roots(coeffs: &[f64], tolerance: f64) -> Result<Vec<ComplexRoot>> {
    if coeffs.iter().all(|&c| c == 0.0) {
        return Err(Error::ZeroPolynomial);
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("polynomial coefficients"));
    }
    if coeffs[0] == 0.0 {
        return Err(Error::InvalidParameter("leading coefficient is zero".into()));
    }
    if coeffs.len() < 2 {
        return Err(Error::InvalidParameter("polynomial degree must be at least 1".into()));
    }

    // Exact zero roots from vanishing trailing coefficients.
    let nonzero_len = coeffs.iter().rposition(|&c| c != 0.0).unwrap() + 1;
    let zeros = coeffs.len() - nonzero_len;
    let monic: Vec<f64> = coeffs[..nonzero_len].iter().map(|c| c / coeffs[0]).collect();

    let mut roots = match monic.len() - 1 {
        0 => Vec::new(),
        1 => vec![Complex64::new(-monic[1], 0.0)],
        _ => {
            let mut r = aberth(&monic)?;
            for z in r.iter_mut() {
                polish(&monic, z);
            }
            pair_conjugates(&mut r);
            r
        }
    };
    roots.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));

    for z in &roots {
        let (value, _) = horner(coeffs, *z);
        if !(value.norm() <= tolerance * residual_scale(coeffs, z.norm())) {
            return Err(Error::NoConvergence {
                what: "polynomial root finder",
                iterations: MAX_ITERATIONS,
            });
        }
    }
    Ok(roots)
}

fn residual_scale(coeffs: &[f64], radius: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, c| acc * radius + c.abs())
}

/// Value and derivative at `z`.
fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(coeffs[0], 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in &coeffs[1..] {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn aberth(monic: &[f64]) -> Result<Vec<Complex64>> {
    let degree = monic.len() - 1;
    // Start on a circle whose radius is the geometric mean of the root
    // moduli, rotated off the real axis to break conjugate symmetry.
    let radius = monic[degree].abs().powf(1.0 / degree as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    for _ in 0..MAX_ITERATIONS {
        let mut largest_step = 0.0f64;
        for k in 0..degree {
            let (p, dp) = horner(monic, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = p / dp;
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if step.is_finite() {
                z[k] -= step;
                largest_step = largest_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if largest_step <= 4.0 * f64::EPSILON {
            return Ok(z);
        }
    }
    // Multiple roots converge only linearly; accept the iterate if it
    // passes the residual check done by the caller.
    Ok(z)
}

fn polish(monic: &[f64], z: &mut Complex64) {
    for _ in 0..3 {
        let (p, dp) = horner(monic, *z);
        if dp.norm() == 0.0 {
            return;
        }
        let next = *z - p / dp;
        let (pn, _) = horner(monic, next);
        if pn.norm() < p.norm() {
            *z = next;
        } else {
            return;
        }
    }
}

/// Snaps near-real roots onto the real axis and replaces each complex
/// root and its nearest mirror image by an exact conjugate pair.
fn pair_conjugates(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut done = vec![false; n];
    for i in 0..n {
        if done[i] {
            continue;
        }
        let zi = roots[i];
        let scale = 1.0 + zi.norm();
        let partner = (0..n)
            .filter(|&j| j != i && !done[j])
            .min_by(|&a, &b| {
                let da = (roots[a] - zi.conj()).norm();
                let db = (roots[b] - zi.conj()).norm();
                da.total_cmp(&db)
            });
        match partner {
            Some(j) if (roots[j] - zi.conj()).norm() <= 1e-6 * scale && zi.im.abs() > 1e-12 * scale => {
                let merged = Complex64::new(0.5 * (zi.re + roots[j].re), 0.5 * (zi.im - roots[j].im).abs());
                roots[i] = merged;
                roots[j] = merged.conj();
                done[i] = true;
                done[j] = true;
            }
            _ => {
                if zi.im.abs() <= 1e-9 * scale {
                    roots[i] = Complex64::new(zi.re, 0.0);
                }
                done[i] = true;
            }
        }
    }
}
