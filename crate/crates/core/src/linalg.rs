//! Small dense symmetric eigenvalue solver, generic over the scalar type.

use crate::scalar::Scalar;

/// Eigenvalues of a symmetric `n×n` matrix (row-major) by cyclic Jacobi
/// rotations, sorted in decreasing order.
pub fn symmetric_eigenvalues<S: Scalar>(n: usize, data: &[S]) -> Vec<S> {
    assert_eq!(data.len(), n * n, "matrix is not n×n");
    let mut a = data.to_vec();
    let eps = S::epsilon();
    for _sweep in 0..100 {
        let mut off = S::zero();
        let mut diag = S::zero();
        for i in 0..n {
            diag += a[i * n + i] * a[i * n + i];
            for j in 0..n {
                if i != j {
                    off += a[i * n + j] * a[i * n + j];
                }
            }
        }
        if off <= eps * eps * diag || off <= S::tiny() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= S::tiny() {
                    continue;
                }
                let (app, aqq) = (a[p * n + p], a[q * n + q]);
                let two = S::one() + S::one();
                let theta = (aqq - app) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + S::one()).sqrt());
                let c = (t * t + S::one()).sqrt().recip();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<S> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// Number of eigenvalues above `rel · max|λ|`. For a positive semidefinite
/// Gram matrix these are its singular values.
pub fn numeric_rank<S: Scalar>(eigenvalues: &[S], rel: S) -> usize {
    let top = eigenvalues.iter().fold(S::zero(), |m, x| m.max(x.abs()));
    if top <= S::zero() {
        return 0;
    }
    eigenvalues.iter().filter(|x| x.abs() > rel * top).count()
}
