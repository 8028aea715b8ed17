use crate::linalg::SymMatrix;
use crate::{Error, Result};

pub const DEFAULT_EIGEN_TOLERANCE: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// `M[i][j] = r(|i - j|)`.
pub fn toeplitz_from_autocorr(r: &[f64]) -> Result<SymMatrix> {
    if r.is_empty() {
        return Err(Error::InvalidParameter("autocorrelation is empty".into()));
    }
    Ok(SymMatrix::from_fn(r.len(), |i, j| r[j - i]))
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotation, sorted in
/// descending order. Sweeps continue until the off-diagonal Frobenius norm
/// is at most `tolerance` times the matrix's Frobenius norm.
pub fn sym_eigenvalues(matrix: &SymMatrix, tolerance: f64) -> Result<Vec<f64>> {
    let n = matrix.order();
    let mut a = matrix.rows();
    let norm = matrix.frobenius_norm();
    let off = |a: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > tolerance * norm {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                what: "Jacobi eigensolver",
                iterations: MAX_SWEEPS,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                // Rotation that annihilates a[p][q].
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig)
}

/// Largest over smallest eigenvalue (infinite when the smallest is not
/// positive).
pub fn eigenvalue_spread(eigenvalues_desc: &[f64]) -> f64 {
    match (eigenvalues_desc.first(), eigenvalues_desc.last()) {
        (Some(&max), Some(&min)) if min > 0.0 => max / min,
        _ => f64::INFINITY,
    }
}
