//! 16x16 image tiles, the unit every transform operates on.

/// Side length of the square tiles cut from an image.
pub const BLOCK_DIM: usize = 16;

/// One 16x16 tile of pixel intensities.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub values: [[f64; BLOCK_DIM]; BLOCK_DIM],
}

impl Block {
    pub fn zero() -> Self {
        Self {
            values: [[0.0; BLOCK_DIM]; BLOCK_DIM],
        }
    }

    /// Fills a block by evaluating `f(row, col)`.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = [[0.0; BLOCK_DIM]; BLOCK_DIM];
        for (m, row) in values.iter_mut().enumerate() {
            for (n, v) in row.iter_mut().enumerate() {
                *v = f(m, n);
            }
        }
        Self { values }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            values: [[c; BLOCK_DIM]; BLOCK_DIM],
        }
    }

    /// Sum of squared pixel values.
    pub fn energy(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|row| row.iter())
            .map(|v| v * v)
            .sum()
    }
}
