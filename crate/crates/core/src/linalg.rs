// Dense kernels for the small symmetric matrices that appear pointwise.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

pub(crate) const MAX_CONDITION: f64 = 1e12;

/// Inverse and determinant of a symmetric positive definite `n x n` matrix
/// stored row-major.
pub(crate) struct SpdInverse {
    pub inv: Vec<f64>,
    pub det: f64,
}

pub(crate) fn spd_inverse(a: &[f64], n: usize) -> Result<SpdInverse> {
    debug_assert_eq!(a.len(), n * n);
    // Cholesky, lower triangle.
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::SingularMetric {
                condition: f64::INFINITY,
            });
        }
        let djj = math::sqrt(d);
        l[j * n + j] = djj;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / djj;
        }
    }
    let mut det = 1.0;
    for j in 0..n {
        det *= l[j * n + j] * l[j * n + j];
    }

    // Columns of the inverse from L L^T x = e_j.
    let mut inv = vec![0.0; n * n];
    let mut y = vec![0.0; n];
    for col in 0..n {
        for i in 0..n {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for k in 0..i {
                s -= l[i * n + k] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= l[k * n + i] * inv[k * n + col];
            }
            inv[i * n + col] = s / l[i * n + i];
        }
    }
    // Exact symmetry of the result.
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (inv[i * n + j] + inv[j * n + i]);
            inv[i * n + j] = v;
            inv[j * n + i] = v;
        }
    }

    let condition = norm1(a, n) * norm1(&inv, n);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::SingularMetric { condition });
    }
    Ok(SpdInverse { inv, det })
}

fn norm1(a: &[f64], n: usize) -> f64 {
    (0..n)
        .map(|j| (0..n).map(|i| math::abs(a[i * n + j])).sum::<f64>())
        .fold(0.0, f64::max)
}
