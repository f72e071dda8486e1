//! Small dense linear algebra for the Gaussian tail sampler.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::sqrt;

/// Lower-triangular factor `L` (row-major, `n × n`) with `L Lᵀ ≈ A` for a
/// symmetric positive semidefinite `A`.
///
/// Pivots below `rel_tol · max diag` are treated as zero and their column is
/// dropped, which is what a rank-deficient covariance (grid points at the
/// pinned ends of a bridge, repeated points) needs.
pub(crate) fn cholesky_psd(a: &[f64], n: usize, rel_tol: f64) -> Vec<f64> {
    debug_assert_eq!(a.len(), n * n);
    let scale = (0..n).map(|i| a[i * n + i]).fold(0.0_f64, f64::max);
    let tol = rel_tol * scale;
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d <= tol {
            continue;
        }
        let pivot = sqrt(d);
        l[j * n + j] = pivot;
        for i in j + 1..n {
            let mut v = a[i * n + j];
            for k in 0..j {
                v -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = v / pivot;
        }
    }
    l
}

/// `out = L z` for a row-major lower-triangular `L`.
pub(crate) fn lower_mul(l: &[f64], n: usize, z: &[f64], out: &mut [f64]) {
    for i in 0..n {
        let row = &l[i * n..i * n + i + 1];
        out[i] = row.iter().zip(z).map(|(a, b)| a * b).sum();
    }
}
