//! Three-level Daubechies-2 wavelet decomposition of 16x16 blocks.
//!
//! The filter bank uses periodic (circular) boundary extension, which keeps
//! the dyadic sizes exact (16 -> 8 -> 4 -> 2) and the transform orthonormal,
//! so the ten output subbands partition the block's energy.

use alloc::vec;
use alloc::vec::Vec;

use crate::block::{Block, BLOCK_DIM};
use crate::error::{Error, Result};

/// Decomposition depth for 16x16 blocks. Deeper is impossible (the LL band
/// bottoms out at 2x2), shallower is not used by the feature set.
pub const DWT_LEVELS: usize = 3;

/// Daubechies-2 analysis filters `(low, high)`, `g[k] = (-1)^k h[3-k]`.
fn db2_filters() -> ([f64; 4], [f64; 4]) {
    let s3 = libm::sqrt(3.0);
    let norm = 4.0 * libm::sqrt(2.0);
    let h = [
        (1.0 + s3) / norm,
        (3.0 + s3) / norm,
        (3.0 - s3) / norm,
        (1.0 - s3) / norm,
    ];
    let g = [h[3], -h[2], h[1], -h[0]];
    (h, g)
}

/// One square wavelet subband, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Subband {
    size: usize,
    values: Vec<f64>,
}

impl Subband {
    pub fn new(size: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != size * size {
            return Err(Error::BadSubbandShape {
                expected: size * size,
                got: values.len(),
            });
        }
        Ok(Self { size, values })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.size + col]
    }

    /// Sum of squared coefficients.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// The three detail bands emitted by one decomposition level.
///
/// The first letter names the filter applied along rows (the horizontal
/// direction), the second the filter applied down columns: `hl` is
/// high-passed horizontally and low-passed vertically.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailBands {
    pub lh: Subband,
    pub hl: Subband,
    pub hh: Subband,
}

impl DetailBands {
    pub fn energy(&self) -> f64 {
        self.lh.energy() + self.hl.energy() + self.hh.energy()
    }
}

/// Full 3-level decomposition of one block: nine detail bands of sizes
/// 8x8, 4x4, 2x2 plus the final 2x2 LL band, ten subbands in total.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandPyramid {
    levels: Vec<DetailBands>,
    final_ll: Subband,
}

impl SubbandPyramid {
    /// Assembles a pyramid from parts, validating the level structure.
    pub fn from_parts(levels: Vec<DetailBands>, final_ll: Subband) -> Result<Self> {
        if levels.len() != DWT_LEVELS {
            return Err(Error::UnsupportedDepth {
                levels: levels.len(),
            });
        }
        for (i, bands) in levels.iter().enumerate() {
            let expected = BLOCK_DIM >> (i + 1);
            for band in [&bands.lh, &bands.hl, &bands.hh] {
                if band.size() != expected {
                    return Err(Error::BadSubbandShape {
                        expected: expected * expected,
                        got: band.size() * band.size(),
                    });
                }
            }
        }
        let ll_size = BLOCK_DIM >> DWT_LEVELS;
        if final_ll.size() != ll_size {
            return Err(Error::BadSubbandShape {
                expected: ll_size * ll_size,
                got: final_ll.size() * final_ll.size(),
            });
        }
        Ok(Self { levels, final_ll })
    }

    /// Detail bands per level, coarsest last (8x8, 4x4, 2x2).
    pub fn levels(&self) -> &[DetailBands] {
        &self.levels
    }

    pub fn final_ll(&self) -> &Subband {
        &self.final_ll
    }

    /// Energy summed over all ten subbands.
    pub fn total_energy(&self) -> f64 {
        self.levels.iter().map(DetailBands::energy).sum::<f64>() + self.final_ll.energy()
    }
}

/// Periodic analysis of one length-`L` signal: `low[n] = sum_k h[k] x[(2n+k) mod L]`.
fn analyze_1d(x: &[f64], h: &[f64; 4], g: &[f64; 4], low: &mut [f64], high: &mut [f64]) {
    let len = x.len();
    for n in 0..len / 2 {
        let mut lo = 0.0;
        let mut hi = 0.0;
        for k in 0..4 {
            let xv = x[(2 * n + k) % len];
            lo += h[k] * xv;
            hi += g[k] * xv;
        }
        low[n] = lo;
        high[n] = hi;
    }
}

/// Transpose of [`analyze_1d`]; exact inverse because the filter bank is orthonormal.
fn synthesize_1d(low: &[f64], high: &[f64], h: &[f64; 4], g: &[f64; 4], x: &mut [f64]) {
    let len = x.len();
    x.fill(0.0);
    for n in 0..len / 2 {
        for k in 0..4 {
            let j = (2 * n + k) % len;
            x[j] += low[n] * h[k] + high[n] * g[k];
        }
    }
}

/// One separable level on a `size`-square matrix: rows first, then columns.
/// Returns `(ll, lh, hl, hh)`, each of side `size / 2`.
fn analyze_2d(input: &[f64], size: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    let (h, g) = db2_filters();
    let half = size / 2;

    // Row pass: columns 0..half hold the low-passed halves.
    let mut rowpass = vec![0.0; size * size];
    for r in 0..size {
        let row = &input[r * size..(r + 1) * size];
        let (low, high) = rowpass[r * size..(r + 1) * size].split_at_mut(half);
        analyze_1d(row, &h, &g, low, high);
    }

    // Column pass on the row-passed data.
    let mut col = vec![0.0; size];
    let mut low = vec![0.0; half];
    let mut high = vec![0.0; half];
    let mut ll = vec![0.0; half * half];
    let mut lh = vec![0.0; half * half];
    let mut hl = vec![0.0; half * half];
    let mut hh = vec![0.0; half * half];
    for c in 0..size {
        for r in 0..size {
            col[r] = rowpass[r * size + c];
        }
        analyze_1d(&col, &h, &g, &mut low, &mut high);
        for n in 0..half {
            if c < half {
                ll[n * half + c] = low[n];
                lh[n * half + c] = high[n];
            } else {
                hl[n * half + (c - half)] = low[n];
                hh[n * half + (c - half)] = high[n];
            }
        }
    }
    (ll, lh, hl, hh)
}

/// Inverse of [`analyze_2d`]: columns first, then rows.
fn synthesize_2d(ll: &[f64], lh: &[f64], hl: &[f64], hh: &[f64], half: usize) -> Vec<f64> {
    let (h, g) = db2_filters();
    let size = half * 2;

    let mut rowpass = vec![0.0; size * size];
    let mut low = vec![0.0; half];
    let mut high = vec![0.0; half];
    let mut col = vec![0.0; size];
    for c in 0..size {
        for n in 0..half {
            if c < half {
                low[n] = ll[n * half + c];
                high[n] = lh[n * half + c];
            } else {
                low[n] = hl[n * half + (c - half)];
                high[n] = hh[n * half + (c - half)];
            }
        }
        synthesize_1d(&low, &high, &h, &g, &mut col);
        for r in 0..size {
            rowpass[r * size + c] = col[r];
        }
    }

    let mut out = vec![0.0; size * size];
    for r in 0..size {
        let (lo, hi) = rowpass[r * size..(r + 1) * size].split_at(half);
        synthesize_1d(lo, hi, &h, &g, &mut out[r * size..(r + 1) * size]);
    }
    out
}

/// Decomposes a block into the ten-subband pyramid. Only `levels == 3` is
/// meaningful for 16x16 input; anything else is rejected.
pub fn dwt2_db2(block: &Block, levels: usize) -> Result<SubbandPyramid> {
    if levels != DWT_LEVELS {
        return Err(Error::UnsupportedDepth { levels });
    }
    let mut current: Vec<f64> = block.values.iter().flatten().copied().collect();
    let mut size = BLOCK_DIM;
    let mut detail = Vec::with_capacity(DWT_LEVELS);
    for _ in 0..DWT_LEVELS {
        let (ll, lh, hl, hh) = analyze_2d(&current, size);
        let half = size / 2;
        detail.push(DetailBands {
            lh: Subband::new(half, lh)?,
            hl: Subband::new(half, hl)?,
            hh: Subband::new(half, hh)?,
        });
        current = ll;
        size = half;
    }
    SubbandPyramid::from_parts(detail, Subband::new(size, current)?)
}

/// Reconstructs the original block from a pyramid.
pub fn idwt2_db2(pyramid: &SubbandPyramid) -> Block {
    let mut current = pyramid.final_ll.values().to_vec();
    let mut half = pyramid.final_ll.size();
    for bands in pyramid.levels.iter().rev() {
        current = synthesize_2d(
            &current,
            bands.lh.values(),
            bands.hl.values(),
            bands.hh.values(),
            half,
        );
        half *= 2;
    }
    debug_assert_eq!(half, BLOCK_DIM);
    Block::from_fn(|m, n| current[m * BLOCK_DIM + n])
}

/// Energies of the nine detail bands, level 1 first, `[lh, hl, hh]` within
/// each level. The final LL band is deliberately excluded.
pub fn subband_energies(pyramid: &SubbandPyramid) -> [f64; 9] {
    let mut out = [0.0; 9];
    for (i, bands) in pyramid.levels.iter().enumerate() {
        out[3 * i] = bands.lh.energy();
        out[3 * i + 1] = bands.hl.energy();
        out[3 * i + 2] = bands.hh.energy();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // --- independent oracle: full circular correlation, then downsample ---

    fn oracle_filters() -> ([f64; 4], [f64; 4]) {
        let s3 = 3f64.sqrt();
        let h = [
            (1.0 + s3) / (4.0 * 2f64.sqrt()),
            (3.0 + s3) / (4.0 * 2f64.sqrt()),
            (3.0 - s3) / (4.0 * 2f64.sqrt()),
            (1.0 - s3) / (4.0 * 2f64.sqrt()),
        ];
        let g = [h[3], -h[2], h[1], -h[0]];
        (h, g)
    }

    fn circ_correlate(x: &[f64], f: &[f64; 4]) -> Vec<f64> {
        (0..x.len())
            .map(|m| (0..4).map(|k| f[k] * x[(m + k) % x.len()]).sum())
            .collect()
    }

    fn downsample2(x: &[f64]) -> Vec<f64> {
        x.iter().step_by(2).copied().collect()
    }

    /// One 2D level done the slow way: correlate + downsample every row,
    /// then every column of each half.
    fn oracle_level(input: &[f64], size: usize) -> [Vec<f64>; 4] {
        let (h, g) = oracle_filters();
        let half = size / 2;
        let mut row_lo = vec![0.0; size * half];
        let mut row_hi = vec![0.0; size * half];
        for r in 0..size {
            let row: Vec<f64> = input[r * size..(r + 1) * size].to_vec();
            row_lo[r * half..(r + 1) * half].copy_from_slice(&downsample2(&circ_correlate(&row, &h)));
            row_hi[r * half..(r + 1) * half].copy_from_slice(&downsample2(&circ_correlate(&row, &g)));
        }
        let col_pass = |data: &[f64], f: &[f64; 4]| -> Vec<f64> {
            let mut out = vec![0.0; half * half];
            for c in 0..half {
                let col: Vec<f64> = (0..size).map(|r| data[r * half + c]).collect();
                let coeffs = downsample2(&circ_correlate(&col, f));
                for n in 0..half {
                    out[n * half + c] = coeffs[n];
                }
            }
            out
        };
        [
            col_pass(&row_lo, &h), // ll
            col_pass(&row_lo, &g), // lh
            col_pass(&row_hi, &h), // hl
            col_pass(&row_hi, &g), // hh
        ]
    }

    fn oracle_pyramid(block: &Block) -> (Vec<[Vec<f64>; 4]>, Vec<f64>) {
        let mut current: Vec<f64> = block.values.iter().flatten().copied().collect();
        let mut size = 16;
        let mut levels = Vec::new();
        for _ in 0..3 {
            let quads = oracle_level(&current, size);
            current = quads[0].clone();
            size /= 2;
            levels.push(quads);
        }
        (levels, current)
    }

    fn random_block(rng: &mut impl rand::Rng) -> Block {
        Block::from_fn(|_, _| rng.random_range(0.0..=255.0))
    }

    #[test]
    fn constant_block_has_zero_detail_and_scaled_ll() {
        let pyramid = dwt2_db2(&Block::constant(7.0), 3).unwrap();
        for bands in pyramid.levels() {
            for band in [&bands.lh, &bands.hl, &bands.hh] {
                for &v in band.values() {
                    assert!(v.abs() < 1e-12, "detail coefficient {v} not zero");
                }
            }
        }
        // Each separable level scales a constant by 2; after 3 levels: 8 * 7.
        for &v in pyramid.final_ll().values() {
            assert!((v - 56.0).abs() < 1e-12);
        }
        for e in subband_energies(&pyramid) {
            assert!(e < 1e-24, "detail energy {e} not negligible");
        }
    }

    #[test]
    fn rejects_other_depths() {
        let block = Block::zero();
        assert!(matches!(
            dwt2_db2(&block, 2),
            Err(Error::UnsupportedDepth { levels: 2 })
        ));
        assert!(matches!(
            dwt2_db2(&block, 4),
            Err(Error::UnsupportedDepth { levels: 4 })
        ));
    }

    #[test]
    fn matches_circular_convolution_oracle() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xd62);
        for _ in 0..50 {
            let block = random_block(&mut rng);
            let pyramid = dwt2_db2(&block, 3).unwrap();
            let (oracle_levels, oracle_ll) = oracle_pyramid(&block);
            for (level, bands) in pyramid.levels().iter().enumerate() {
                let [_, ref o_lh, ref o_hl, ref o_hh] = oracle_levels[level];
                for (mine, oracle) in [
                    (&bands.lh, o_lh),
                    (&bands.hl, o_hl),
                    (&bands.hh, o_hh),
                ] {
                    for (a, b) in mine.values().iter().zip(oracle.iter()) {
                        assert!((a - b).abs() <= 1e-10, "level {level}: {a} vs {b}");
                    }
                }
            }
            for (a, b) in pyramid.final_ll().values().iter().zip(oracle_ll.iter()) {
                assert!((a - b).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn energy_partition_and_reconstruction() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xe4e);
        for _ in 0..50 {
            let block = random_block(&mut rng);
            let pyramid = dwt2_db2(&block, 3).unwrap();
            let block_energy = block.energy();
            let rel = (pyramid.total_energy() - block_energy).abs() / block_energy;
            assert!(rel <= 1e-9, "energy drift {rel:e}");

            let restored = idwt2_db2(&pyramid);
            for (a, b) in block
                .values
                .iter()
                .flatten()
                .zip(restored.values.iter().flatten())
            {
                assert!((a - b).abs() <= 1e-9, "reconstruction error {}", (a - b).abs());
            }
        }
    }

    #[test]
    fn energies_are_squared_sums_in_level_order() {
        let zero = |size: usize| Subband::new(size, vec![0.0; size * size]).unwrap();
        let mut lh1 = vec![0.0; 64];
        lh1[12] = 3.0;
        let levels = vec![
            DetailBands {
                lh: Subband::new(8, lh1).unwrap(),
                hl: zero(8),
                hh: zero(8),
            },
            DetailBands {
                lh: zero(4),
                hl: zero(4),
                hh: zero(4),
            },
            DetailBands {
                lh: zero(2),
                hl: zero(2),
                hh: zero(2),
            },
        ];
        let pyramid = SubbandPyramid::from_parts(levels, zero(2)).unwrap();
        assert_eq!(
            subband_energies(&pyramid),
            [9.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn detail_energies_plus_ll_equal_block_energy() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x10e);
        let block = random_block(&mut rng);
        let pyramid = dwt2_db2(&block, 3).unwrap();
        let total: f64 =
            subband_energies(&pyramid).iter().sum::<f64>() + pyramid.final_ll().energy();
        let rel = (total - block.energy()).abs() / block.energy();
        assert!(rel <= 1e-9);
    }

    #[test]
    fn from_parts_validates_shape() {
        let zero = |size: usize| Subband::new(size, vec![0.0; size * size]).unwrap();
        let bands = |size: usize| DetailBands {
            lh: zero(size),
            hl: zero(size),
            hh: zero(size),
        };
        assert!(matches!(
            SubbandPyramid::from_parts(vec![bands(8), bands(4)], zero(2)),
            Err(Error::UnsupportedDepth { levels: 2 })
        ));
        assert!(SubbandPyramid::from_parts(vec![bands(8), bands(4), bands(4)], zero(2)).is_err());
        assert!(SubbandPyramid::from_parts(vec![bands(8), bands(4), bands(2)], zero(4)).is_err());
    }
}
