//! Binary 8-bit PGM (P5, maxval 255) reading and writing.
//!
//! This is the dataset interchange format: loaders promote pixels to f64,
//! the writer rounds back to bytes, so integer-valued images round-trip
//! exactly.

use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use palmid_core::GrayImage;

use crate::error::{DataError, DataResult};

/// Why raw bytes failed to decode.
#[derive(Debug)]
pub enum DecodeError {
    /// The byte stream is not a valid maxval-255 P5 file.
    Format(String),
    /// The file decoded but violates image invariants (dimensions).
    Image(palmid_core::Error),
}

impl std::fmt::Display for DecodeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecodeError::Format(s) => f.write_str(s),
            DecodeError::Image(e) => write!(f, "{e}"),
        }
    }
}

/// Parses P5 bytes into an image.
pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage, DecodeError> {
    let fmt = |s: &str| DecodeError::Format(s.to_string());
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(fmt("not a binary PGM (missing P5 magic)"));
    }
    let mut pos = 2;

    // Header tokens are separated by whitespace; '#' starts a comment
    // running to end of line.
    let next_token = |pos: &mut usize| -> Result<u64, String> {
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < bytes.len() && bytes[*pos] == b'#' {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
                continue;
            }
            break;
        }
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if *pos == start {
            return Err("malformed PGM header".into());
        }
        std::str::from_utf8(&bytes[start..*pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| "header value out of range".to_string())
    };

    let width = next_token(&mut pos).map_err(|e| fmt(&e))? as usize;
    let height = next_token(&mut pos).map_err(|e| fmt(&e))? as usize;
    let maxval = next_token(&mut pos).map_err(|e| fmt(&e))?;
    if maxval != 255 {
        return Err(fmt(&format!("maxval {maxval} unsupported (must be 255)")));
    }
    // Exactly one whitespace byte separates the header from pixel data.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(fmt("missing whitespace after maxval"));
    }
    pos += 1;

    let expected = width
        .checked_mul(height)
        .ok_or_else(|| fmt("image dimensions overflow"))?;
    let data = &bytes[pos..];
    if data.len() < expected {
        return Err(fmt(&format!(
            "truncated pixel data: {} bytes, expected {expected}",
            data.len()
        )));
    }
    let pixels: Vec<f64> = data[..expected].iter().map(|&b| b as f64).collect();
    GrayImage::new(width, height, pixels).map_err(DecodeError::Image)
}

/// Encodes an image as P5 bytes, rounding pixels to the nearest byte and
/// clamping to [0, 255].
pub fn encode_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend(
        image
            .pixels()
            .iter()
            .map(|&p| p.round().clamp(0.0, 255.0) as u8),
    );
    out
}

/// Loads a PGM file from disk.
pub fn read_pgm(path: &Path) -> DataResult<GrayImage> {
    let bytes = fs::read(path).map_err(|e| {
        if e.kind() == ErrorKind::NotFound {
            DataError::FileNotFound(path.to_path_buf())
        } else {
            DataError::Io {
                path: path.to_path_buf(),
                source: e,
            }
        }
    })?;
    decode_pgm(&bytes).map_err(|e| match e {
        DecodeError::Format(reason) => DataError::UnsupportedFormat {
            path: path.to_path_buf(),
            reason,
        },
        DecodeError::Image(source) => DataError::Image {
            path: path.to_path_buf(),
            source,
        },
    })
}

/// Writes an image as binary PGM.
pub fn write_pgm(path: &Path, image: &GrayImage) -> DataResult<()> {
    fs::write(path, encode_pgm(image)).map_err(|e| DataError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_minimal_image() {
        let mut bytes = b"P5\n16 16\n255\n".to_vec();
        bytes.extend(std::iter::repeat_n(0u8, 256));
        let img = decode_pgm(&bytes).unwrap();
        assert_eq!((img.width(), img.height()), (16, 16));
        assert!(img.pixels().iter().all(|&p| p == 0.0));

        let mut bytes = b"P5 16 16 255 ".to_vec();
        bytes.extend(std::iter::repeat_n(255u8, 256));
        let img = decode_pgm(&bytes).unwrap();
        assert!(img.pixels().iter().all(|&p| p == 255.0));
    }

    #[test]
    fn honors_comments_in_header() {
        let mut bytes = b"P5\n# written by a scanner\n16 # width\n16\n255\n".to_vec();
        bytes.extend(std::iter::repeat_n(7u8, 256));
        let img = decode_pgm(&bytes).unwrap();
        assert_eq!(img.get(0, 0), 7.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(decode_pgm(b"P6\n16 16\n255\n").is_err());
        assert!(decode_pgm(b"P5\n16 16\n65535\n").is_err());
        let mut short = b"P5\n16 16\n255\n".to_vec();
        short.extend(std::iter::repeat_n(0u8, 100));
        assert!(decode_pgm(&short).is_err());
        // 17 is not a multiple of 16.
        let mut bytes = b"P5\n17 16\n255\n".to_vec();
        bytes.extend(std::iter::repeat_n(0u8, 17 * 16));
        assert!(matches!(
            decode_pgm(&bytes),
            Err(DecodeError::Image(
                palmid_core::Error::DimensionNotMultipleOf16 { width: 17, .. }
            ))
        ));
    }

    #[test]
    fn round_trips_byte_exact() {
        let img = GrayImage::from_fn(32, 16, |r, c| ((r * 31 + c * 7) % 256) as f64).unwrap();
        let encoded = encode_pgm(&img);
        let back = decode_pgm(&encoded).unwrap();
        assert_eq!(back, img);
        assert_eq!(encode_pgm(&back), encoded);
    }

    #[test]
    fn file_round_trip_and_missing_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.pgm");
        let img = GrayImage::from_fn(16, 16, |r, c| (r * 16 + c) as f64).unwrap();
        write_pgm(&path, &img).unwrap();
        assert_eq!(read_pgm(&path).unwrap(), img);

        let missing = dir.path().join("absent.pgm");
        assert!(matches!(
            read_pgm(&missing),
            Err(DataError::FileNotFound(_))
        ));
    }
}
