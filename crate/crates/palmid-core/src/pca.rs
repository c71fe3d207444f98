//! Principal component analysis with retained-energy accounting.
//!
//! The covariance is the unnormalized scatter `C = sum_i z_i z_i^T` of the
//! centered vectors; eigenvectors and retained-energy ratios are invariant
//! to that scaling. When there are fewer samples than dimensions the
//! N x N Gram matrix is diagonalized instead, which yields the same
//! nonzero spectrum and the same principal directions.

use alloc::vec;
use alloc::vec::Vec;

use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};

/// Eigenvalues below this fraction of the largest are clamped to zero; they
/// are numerical noise and would destabilize retained-energy ratios.
pub const EIGENVALUE_CLAMP_REL: f64 = 1e-12;

/// A fitted PCA basis: mean vector, unit-norm components, and the matching
/// non-increasing eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    mean: Vec<f64>,
    eigenvalues: Vec<f64>,
    components: Vec<Vec<f64>>,
    dim: usize,
}

impl PcaModel {
    /// Rebuilds a model from stored parts (deserialization path).
    pub fn from_parts(
        mean: Vec<f64>,
        eigenvalues: Vec<f64>,
        components: Vec<Vec<f64>>,
        dim: usize,
    ) -> Result<Self> {
        if mean.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: mean.len(),
            });
        }
        if eigenvalues.len() != components.len() || components.len() > dim {
            return Err(Error::LengthMismatch {
                expected: eigenvalues.len(),
                got: components.len(),
            });
        }
        for c in &components {
            if c.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    got: c.len(),
                });
            }
        }
        for pair in eigenvalues.windows(2) {
            if pair[1] > pair[0] {
                return Err(Error::InvalidParameter("eigenvalues must be non-increasing"));
            }
        }
        if eigenvalues.iter().any(|&l| l < 0.0) {
            return Err(Error::InvalidParameter("eigenvalues must be non-negative"));
        }
        Ok(Self {
            mean,
            eigenvalues,
            components,
            dim,
        })
    }

    /// Mean of the training vectors.
    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Eigenvalues of the scatter matrix, non-increasing, clamped at zero.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unit-norm principal directions, variance order.
    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// Original feature dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored components (equals `dim` when fitted with at least
    /// as many samples as dimensions; the data rank bound otherwise).
    pub fn component_count(&self) -> usize {
        self.components.len()
    }
}

/// Makes the largest-magnitude coordinate positive, so eigenvector signs
/// are reproducible across runs and serializations.
fn canonicalize_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

fn clamp_spectrum(eigenvalues: &mut [f64]) {
    let max = eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let floor = EIGENVALUE_CLAMP_REL * max;
    for l in eigenvalues.iter_mut() {
        if *l < floor {
            *l = 0.0;
        }
    }
}

/// Fits a PCA model on `vectors` (at least two, equal lengths).
///
/// Small eigenvalues are clamped per [`EIGENVALUE_CLAMP_REL`]. With fewer
/// samples than dimensions only the components of the nonzero spectrum can
/// exist and only those are stored.
pub fn pca_fit(vectors: &[Vec<f64>]) -> Result<PcaModel> {
    let n = vectors.len();
    if n < 2 {
        return Err(Error::TooFewSamples { min: 2, got: n });
    }
    let dim = vectors[0].len();
    if dim == 0 {
        return Err(Error::InvalidParameter("vectors must be non-empty"));
    }
    for v in vectors {
        if v.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: v.len(),
            });
        }
    }

    let mut mean = vec![0.0; dim];
    for v in vectors {
        for (m, x) in mean.iter_mut().zip(v.iter()) {
            *m += x;
        }
    }
    for m in mean.iter_mut() {
        *m /= n as f64;
    }

    let centered: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| v.iter().zip(mean.iter()).map(|(x, m)| x - m).collect())
        .collect();

    let (mut eigenvalues, mut components) = if dim <= n {
        // Direct scatter matrix C = Z^T Z, dim x dim.
        let mut scatter = vec![0.0; dim * dim];
        for z in &centered {
            for a in 0..dim {
                for b in a..dim {
                    scatter[a * dim + b] += z[a] * z[b];
                }
            }
        }
        for a in 0..dim {
            for b in 0..a {
                scatter[a * dim + b] = scatter[b * dim + a];
            }
        }
        let (mut vals, vecs) = symmetric_eigen(&scatter, dim)?;
        clamp_spectrum(&mut vals);
        (vals, vecs)
    } else {
        // Gram route: G[i][j] = <z_i, z_j>, n x n; for G w = l w with l > 0,
        // Z^T w / |Z^T w| is the matching unit eigenvector of C.
        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let dot: f64 = centered[i]
                    .iter()
                    .zip(centered[j].iter())
                    .map(|(a, b)| a * b)
                    .sum();
                gram[i * n + j] = dot;
                gram[j * n + i] = dot;
            }
        }
        let (mut vals, weights) = symmetric_eigen(&gram, n)?;
        clamp_spectrum(&mut vals);
        let mut kept_vals = Vec::new();
        let mut kept_vecs = Vec::new();
        for (l, w) in vals.iter().zip(weights.iter()) {
            if *l <= 0.0 {
                continue;
            }
            let mut direction = vec![0.0; dim];
            for (zi, wi) in centered.iter().zip(w.iter()) {
                for (d, z) in direction.iter_mut().zip(zi.iter()) {
                    *d += wi * z;
                }
            }
            let norm: f64 = libm::sqrt(direction.iter().map(|x| x * x).sum());
            if norm == 0.0 {
                continue;
            }
            for d in direction.iter_mut() {
                *d /= norm;
            }
            kept_vals.push(*l);
            kept_vecs.push(direction);
        }
        (kept_vals, kept_vecs)
    };

    for c in components.iter_mut() {
        canonicalize_sign(c);
    }
    // Keep the pairing intact if clamping reordered nothing; lengths may
    // differ only in the direct route where zero eigenvalues keep vectors.
    debug_assert_eq!(eigenvalues.len(), components.len());
    debug_assert!(eigenvalues.windows(2).all(|p| p[0] >= p[1]));
    clamp_spectrum(&mut eigenvalues);

    Ok(PcaModel {
        mean,
        eigenvalues,
        components,
        dim,
    })
}

/// Coordinates of `v` in the first `k` principal directions.
pub fn pca_project(model: &PcaModel, v: &[f64], k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > model.component_count() {
        return Err(Error::KOutOfRange {
            k,
            max: model.component_count(),
        });
    }
    if v.len() != model.dim {
        return Err(Error::LengthMismatch {
            expected: model.dim,
            got: v.len(),
        });
    }
    Ok(model.components[..k]
        .iter()
        .map(|c| {
            v.iter()
                .zip(model.mean.iter())
                .zip(c.iter())
                .map(|((x, m), ci)| (x - m) * ci)
                .sum()
        })
        .collect())
}

/// Rebuilds a vector from projection coordinates: mean + sum of scaled
/// components. Exact when the coordinates span the data's full rank.
pub fn pca_reconstruct(model: &PcaModel, coords: &[f64]) -> Result<Vec<f64>> {
    if coords.len() > model.component_count() {
        return Err(Error::KOutOfRange {
            k: coords.len(),
            max: model.component_count(),
        });
    }
    let mut out = model.mean.clone();
    for (alpha, c) in coords.iter().zip(model.components.iter()) {
        for (o, ci) in out.iter_mut().zip(c.iter()) {
            *o += alpha * ci;
        }
    }
    Ok(out)
}

/// Fraction of spectrum energy captured by the first `k` eigenvalues,
/// `sum_{i<=k} l_i / sum_i l_i`. Components beyond the stored rank carry
/// zero eigenvalue, so any `k` up to the original dimension is meaningful.
pub fn retained_energy(model: &PcaModel, k: usize) -> Result<f64> {
    if k == 0 || k > model.dim {
        return Err(Error::KOutOfRange { k, max: model.dim });
    }
    let total: f64 = model.eigenvalues.iter().sum();
    if total <= 0.0 {
        return Err(Error::DegenerateSpectrum);
    }
    let kept: f64 = model.eigenvalues[..k.min(model.eigenvalues.len())].iter().sum();
    Ok(kept / total)
}
