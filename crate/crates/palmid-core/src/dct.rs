//! Orthonormal 2D DCT-II on 16x16 blocks.

use core::f64::consts::PI;

use crate::block::{Block, BLOCK_DIM};

/// DCT coefficients of one block, `values[u][v]`.
///
/// The normalization makes the transform orthonormal, so the sum of
/// squared coefficients equals the source block's energy.
#[derive(Debug, Clone, PartialEq)]
pub struct DctCoefficients {
    pub values: [[f64; BLOCK_DIM]; BLOCK_DIM],
}

impl DctCoefficients {
    /// Sum of squared coefficients.
    pub fn energy(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|row| row.iter())
            .map(|v| v * v)
            .sum()
    }
}

/// Precomputed 16-point DCT-II basis, reused across blocks.
///
/// `basis[u][m] = alpha_u * cos(pi * (2m + 1) * u / 32)` with
/// `alpha_0 = sqrt(1/16)` and `alpha_u = sqrt(2/16)` otherwise.
#[derive(Debug, Clone)]
pub struct Dct16 {
    basis: [[f64; BLOCK_DIM]; BLOCK_DIM],
}

impl Dct16 {
    pub fn new() -> Self {
        let dim = BLOCK_DIM as f64;
        let mut basis = [[0.0; BLOCK_DIM]; BLOCK_DIM];
        for (u, row) in basis.iter_mut().enumerate() {
            let alpha = if u == 0 {
                libm::sqrt(1.0 / dim)
            } else {
                libm::sqrt(2.0 / dim)
            };
            for (m, v) in row.iter_mut().enumerate() {
                *v = alpha * libm::cos(PI * (2 * m + 1) as f64 * u as f64 / (2.0 * dim));
            }
        }
        Self { basis }
    }

    /// Separable transform: `F = A * X * A^T`.
    pub fn forward(&self, block: &Block) -> DctCoefficients {
        let a = &self.basis;
        // rows[u][n] = sum_m a[u][m] * x[m][n]
        let mut rows = [[0.0; BLOCK_DIM]; BLOCK_DIM];
        for u in 0..BLOCK_DIM {
            for n in 0..BLOCK_DIM {
                let mut acc = 0.0;
                for m in 0..BLOCK_DIM {
                    acc += a[u][m] * block.values[m][n];
                }
                rows[u][n] = acc;
            }
        }
        let mut values = [[0.0; BLOCK_DIM]; BLOCK_DIM];
        for u in 0..BLOCK_DIM {
            for v in 0..BLOCK_DIM {
                let mut acc = 0.0;
                for n in 0..BLOCK_DIM {
                    acc += rows[u][n] * a[v][n];
                }
                values[u][v] = acc;
            }
        }
        DctCoefficients { values }
    }
}

impl Default for Dct16 {
    fn default() -> Self {
        Self::new()
    }
}

/// Transforms a single block. Computes the basis on every call; batch
/// callers should hold a [`Dct16`] instead.
pub fn dct2(block: &Block) -> DctCoefficients {
    Dct16::new().forward(block)
}
