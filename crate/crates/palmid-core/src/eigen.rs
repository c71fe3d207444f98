//! Cyclic Jacobi eigendecomposition for dense symmetric matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Diagonalizes a symmetric `n x n` matrix (row-major, untouched).
///
/// Returns eigenvalues and matching unit eigenvectors sorted by eigenvalue,
/// largest first. Jacobi rotations converge to machine precision for the
/// matrix sizes this crate produces (Gram or covariance matrices up to a
/// few thousand rows).
pub(crate) fn symmetric_eigen(matrix: &[f64], n: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    assert_eq!(matrix.len(), n * n, "matrix must be n*n");
    let mut a = matrix.to_vec();
    // Accumulated rotations; column j converges to eigenvector j.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let frob: f64 = libm::sqrt(a.iter().map(|x| x * x).sum());
    let tol = 1e-14 * frob;

    if frob > 0.0 {
        let mut converged = false;
        for _sweep in 0..MAX_SWEEPS {
            let mut off: f64 = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += 2.0 * a[p * n + q] * a[p * n + q];
                }
            }
            if libm::sqrt(off) <= tol {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = a[p * n + p];
                    let aqq = a[q * n + q];
                    let theta = (aqq - app) / (2.0 * apq);
                    // Smaller root of t^2 + 2t*theta - 1 = 0; the guard keeps
                    // theta^2 from overflowing.
                    let t = if theta.abs() > 1e153 {
                        0.5 / theta
                    } else {
                        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                        sign / (theta.abs() + libm::sqrt(theta * theta + 1.0))
                    };
                    let c = 1.0 / libm::sqrt(t * t + 1.0);
                    let s = t * c;

                    for i in 0..n {
                        if i != p && i != q {
                            let aip = a[i * n + p];
                            let aiq = a[i * n + q];
                            a[i * n + p] = c * aip - s * aiq;
                            a[p * n + i] = a[i * n + p];
                            a[i * n + q] = s * aip + c * aiq;
                            a[q * n + i] = a[i * n + q];
                        }
                    }
                    a[p * n + p] = app - t * apq;
                    a[q * n + q] = aqq + t * apq;
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;

                    for i in 0..n {
                        let vip = v[i * n + p];
                        let viq = v[i * n + q];
                        v[i * n + p] = c * vip - s * viq;
                        v[i * n + q] = s * vip + c * viq;
                    }
                }
            }
        }
        if !converged {
            // One final check: the last sweep may have finished the job.
            let mut off: f64 = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += 2.0 * a[p * n + q] * a[p * n + q];
                }
            }
            if libm::sqrt(off) > tol {
                return Err(Error::EigenDidNotConverge { sweeps: MAX_SWEEPS });
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[j * n + j]
            .partial_cmp(&a[i * n + i])
            .unwrap_or(core::cmp::Ordering::Equal)
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&j| (0..n).map(|i| v[i * n + j]).collect())
        .collect();
    Ok((eigenvalues, eigenvectors))
}
