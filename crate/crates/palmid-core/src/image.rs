//! Grayscale region-of-interest rasters.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::BLOCK_DIM;

/// A single-channel intensity raster stored row-major.
///
/// Pixels are promoted to `f64` at construction so every downstream
/// transform runs in double precision. Both dimensions must be positive
/// multiples of 16 so the block partition is exact; the reference input
/// is a 128x128 palm ROI.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    /// Builds an image, validating the block-partition invariants.
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0
            || height == 0
            || !width.is_multiple_of(BLOCK_DIM)
            || !height.is_multiple_of(BLOCK_DIM)
        {
            return Err(Error::DimensionNotMultipleOf16 { width, height });
        }
        if pixels.len() != width * height {
            return Err(Error::PixelCountMismatch {
                expected: width * height,
                got: pixels.len(),
            });
        }
        if let Some(index) = pixels.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinitePixel { index });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(row, col)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                pixels.push(f(row, col));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Row-major pixel buffer, `height * width` entries.
    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn accepts_multiples_of_16() {
        let img = GrayImage::new(16, 32, vec![0.0; 512]).unwrap();
        assert_eq!(img.width(), 16);
        assert_eq!(img.height(), 32);
    }

    #[test]
    fn rejects_non_multiple_dimensions() {
        let err = GrayImage::new(17, 32, vec![0.0; 17 * 32]).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionNotMultipleOf16 {
                width: 17,
                height: 32
            }
        );
        assert!(GrayImage::new(0, 16, vec![]).is_err());
    }

    #[test]
    fn rejects_wrong_pixel_count() {
        let err = GrayImage::new(16, 16, vec![0.0; 255]).unwrap_err();
        assert_eq!(
            err,
            Error::PixelCountMismatch {
                expected: 256,
                got: 255
            }
        );
    }

    #[test]
    fn rejects_non_finite_pixels() {
        let mut pixels = vec![0.0; 256];
        pixels[7] = f64::NAN;
        let err = GrayImage::new(16, 16, pixels).unwrap_err();
        assert_eq!(err, Error::NonFinitePixel { index: 7 });
    }

    #[test]
    fn row_major_indexing() {
        let img = GrayImage::from_fn(16, 16, |r, c| (r * 16 + c) as f64).unwrap();
        assert_eq!(img.get(0, 1), 1.0);
        assert_eq!(img.get(1, 0), 16.0);
        assert_eq!(img.get(15, 15), 255.0);
    }
}
