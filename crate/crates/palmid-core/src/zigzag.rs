//! Zig-zag coefficient ordering for 16x16 DCT blocks.

use alloc::vec::Vec;

use crate::block::BLOCK_DIM;
use crate::dct::DctCoefficients;
use crate::error::{Error, Result};

/// Number of DCT coefficients kept per block by default. Keeping more
/// than 9 brings no significant accuracy gain on palm ROIs.
pub const DEFAULT_DCT_COUNT: usize = 9;

/// Zig-zag scan positions as `(row, col)` pairs, lowest frequencies first.
///
/// Generated by the classic boundary-bouncing walk; the first ten entries
/// are (0,0),(0,1),(1,0),(2,0),(1,1),(0,2),(0,3),(1,2),(2,1),(3,0).
pub const ZIGZAG_ORDER: [(u8, u8); BLOCK_DIM * BLOCK_DIM] = zigzag_walk();

const fn zigzag_walk() -> [(u8, u8); 256] {
    let last = (BLOCK_DIM - 1) as i32;
    let mut order = [(0u8, 0u8); 256];
    let (mut row, mut col) = (0i32, 0i32);
    let mut upward = true; // next move heads up-right
    let mut i = 0;
    while i < 256 {
        order[i] = (row as u8, col as u8);
        if upward {
            if col == last {
                row += 1;
                upward = false;
            } else if row == 0 {
                col += 1;
                upward = false;
            } else {
                row -= 1;
                col += 1;
            }
        } else if row == last {
            col += 1;
            upward = true;
        } else if col == 0 {
            row += 1;
            upward = true;
        } else {
            row += 1;
            col -= 1;
        }
        i += 1;
    }
    order
}

/// Returns the first `count` coefficients in zig-zag order.
pub fn zigzag_take(coeffs: &DctCoefficients, count: usize) -> Result<Vec<f64>> {
    if count == 0 || count > BLOCK_DIM * BLOCK_DIM {
        return Err(Error::CountOutOfRange {
            count,
            max: BLOCK_DIM * BLOCK_DIM,
        });
    }
    Ok(ZIGZAG_ORDER[..count]
        .iter()
        .map(|&(r, c)| coeffs.values[r as usize][c as usize])
        .collect())
}
