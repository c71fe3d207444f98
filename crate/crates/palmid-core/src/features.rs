//! Per-image feature assembly and population standardization.
//!
//! Every 16x16 tile contributes one column: its leading DCT coefficients in
//! zig-zag order stacked over the nine wavelet detail-band energies. Columns
//! are concatenated block by block to form the flattened per-image vector.

use alloc::vec::Vec;

use crate::block::{Block, BLOCK_DIM};
use crate::dct::Dct16;
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::wavelet::{dwt2_db2, subband_energies, DWT_LEVELS};
use crate::zigzag::{zigzag_take, DEFAULT_DCT_COUNT, ZIGZAG_ORDER};

/// Features per block with the default 9 DCT coefficients: 9 + 9 energies.
pub const FEATURES_PER_BLOCK: usize = DEFAULT_DCT_COUNT + 9;

/// Cuts an image into 16x16 tiles in row-major order.
///
/// `GrayImage` construction guarantees exact tiling, so this cannot fail;
/// concatenating the blocks reproduces the image.
pub fn block_partition(image: &GrayImage) -> Vec<Block> {
    let blocks_across = image.width() / BLOCK_DIM;
    let blocks_down = image.height() / BLOCK_DIM;
    let mut blocks = Vec::with_capacity(blocks_across * blocks_down);
    for by in 0..blocks_down {
        for bx in 0..blocks_across {
            blocks.push(Block::from_fn(|m, n| {
                image.get(by * BLOCK_DIM + m, bx * BLOCK_DIM + n)
            }));
        }
    }
    blocks
}

/// Per-image feature matrix: one column per block, blocks in row-major
/// scan order. Stored column-major so the canonical flattened vector is
/// simply the blocks' feature vectors concatenated in order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    rows: usize,
    block_count: usize,
    values: Vec<f64>,
}

impl FeatureMatrix {
    /// Features per block (18 with the default DCT count).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of blocks, `width * height / 256`.
    pub fn block_count(&self) -> usize {
        self.block_count
    }

    /// Flattened dimension `rows * block_count`.
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Feature vector of block `m`.
    pub fn column(&self, m: usize) -> &[f64] {
        &self.values[m * self.rows..(m + 1) * self.rows]
    }

    /// The flattened length-`dim` vector.
    pub fn as_flat(&self) -> &[f64] {
        &self.values
    }

    pub fn into_flat(self) -> Vec<f64> {
        self.values
    }
}

/// Extracts block features with a reusable DCT plan.
#[derive(Debug, Clone)]
pub struct FeatureExtractor {
    dct: Dct16,
    dct_count: usize,
}

impl FeatureExtractor {
    /// Extractor with the default 9 DCT coefficients per block.
    pub fn new() -> Self {
        Self {
            dct: Dct16::new(),
            dct_count: DEFAULT_DCT_COUNT,
        }
    }

    /// Overrides how many zig-zag DCT coefficients each block keeps.
    pub fn with_dct_count(dct_count: usize) -> Result<Self> {
        if dct_count == 0 || dct_count > ZIGZAG_ORDER.len() {
            return Err(Error::CountOutOfRange {
                count: dct_count,
                max: ZIGZAG_ORDER.len(),
            });
        }
        Ok(Self {
            dct: Dct16::new(),
            dct_count,
        })
    }

    pub fn dct_count(&self) -> usize {
        self.dct_count
    }

    /// Features per block: `dct_count` + 9 wavelet energies.
    pub fn features_per_block(&self) -> usize {
        self.dct_count + 9
    }

    /// One block's feature vector: zig-zag DCT coefficients, then the nine
    /// detail-band energies.
    pub fn block_features(&self, block: &Block) -> Vec<f64> {
        let coeffs = self.dct.forward(block);
        let mut features =
            zigzag_take(&coeffs, self.dct_count).expect("dct_count validated at construction");
        let pyramid = dwt2_db2(block, DWT_LEVELS).expect("depth 3 is always valid");
        features.extend_from_slice(&subband_energies(&pyramid));
        features
    }

    /// Feature matrix of a whole image, one column per row-major block.
    pub fn image_features(&self, image: &GrayImage) -> FeatureMatrix {
        let blocks = block_partition(image);
        let rows = self.features_per_block();
        let mut values = Vec::with_capacity(rows * blocks.len());
        for block in &blocks {
            values.extend_from_slice(&self.block_features(block));
        }
        FeatureMatrix {
            rows,
            block_count: blocks.len(),
            values,
        }
    }
}

impl Default for FeatureExtractor {
    fn default() -> Self {
        Self::new()
    }
}

/// One block's feature vector with the default DCT count.
pub fn block_features(block: &Block) -> Vec<f64> {
    FeatureExtractor::new().block_features(block)
}

/// One image's feature matrix with the default DCT count.
pub fn image_features(image: &GrayImage) -> FeatureMatrix {
    FeatureExtractor::new().image_features(image)
}

/// Per-coordinate mean and population standard deviation over a training
/// population, used to precondition features for PCA and distance matching.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    means: Vec<f64>,
    stddevs: Vec<f64>,
}

impl Standardizer {
    /// Fits means and population standard deviations over `vectors`.
    pub fn fit(vectors: &[Vec<f64>]) -> Result<Self> {
        if vectors.len() < 2 {
            return Err(Error::TooFewSamples {
                min: 2,
                got: vectors.len(),
            });
        }
        let dim = vectors[0].len();
        for v in vectors {
            if v.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
        }
        let n = vectors.len() as f64;
        let mut means = alloc::vec![0.0; dim];
        for v in vectors {
            for (m, x) in means.iter_mut().zip(v.iter()) {
                *m += x;
            }
        }
        for m in means.iter_mut() {
            *m /= n;
        }
        let mut stddevs = alloc::vec![0.0; dim];
        for v in vectors {
            for ((s, x), m) in stddevs.iter_mut().zip(v.iter()).zip(means.iter()) {
                let d = x - m;
                *s += d * d;
            }
        }
        for s in stddevs.iter_mut() {
            *s = libm::sqrt(*s / n);
        }
        Ok(Self { means, stddevs })
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn stddevs(&self) -> &[f64] {
        &self.stddevs
    }

    /// Centers and scales `v`; coordinates whose training stddev is zero
    /// carry no information and map to 0.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.means.len() {
            return Err(Error::LengthMismatch {
                expected: self.means.len(),
                got: v.len(),
            });
        }
        Ok(v.iter()
            .zip(self.means.iter())
            .zip(self.stddevs.iter())
            .map(|((x, m), s)| if *s == 0.0 { 0.0 } else { (x - m) / s })
            .collect())
    }
}

/// Free-function spelling of [`Standardizer::fit`].
pub fn fit_standardizer(vectors: &[Vec<f64>]) -> Result<Standardizer> {
    Standardizer::fit(vectors)
}

/// Free-function spelling of [`Standardizer::apply`].
pub fn apply_standardizer(s: &Standardizer, v: &[f64]) -> Result<Vec<f64>> {
    s.apply(v)
}
