//! Lossless binary serialization of fitted PCA models.
//!
//! Layout (all integers and floats little-endian):
//! magic `PALMPCA1`, u64 dim, u64 component count, then the mean (dim
//! f64), eigenvalues (count f64), and components (count rows of dim f64).

use std::fs;
use std::path::Path;

use palmid_core::PcaModel;

use crate::error::{DataError, DataResult};

const MAGIC: &[u8; 8] = b"PALMPCA1";

pub fn encode_model(model: &PcaModel) -> Vec<u8> {
    let dim = model.dim();
    let count = model.component_count();
    let mut out = Vec::with_capacity(16 + 8 + 8 * (dim + count + count * dim));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(dim as u64).to_le_bytes());
    out.extend_from_slice(&(count as u64).to_le_bytes());
    let mut push = |values: &[f64]| {
        for v in values {
            out.extend_from_slice(&v.to_le_bytes());
        }
    };
    push(model.mean());
    push(model.eigenvalues());
    for c in model.components() {
        push(c);
    }
    out
}

pub fn decode_model(bytes: &[u8]) -> Result<PcaModel, String> {
    if bytes.len() < 24 || &bytes[..8] != MAGIC {
        return Err("not a palmid PCA model (bad magic)".into());
    }
    let dim = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    let count = u64::from_le_bytes(bytes[16..24].try_into().unwrap()) as usize;
    let expected = 24 + 8 * (dim + count + count * dim);
    if bytes.len() != expected {
        return Err(format!(
            "model payload is {} bytes, expected {expected}",
            bytes.len()
        ));
    }
    let mut offset = 24;
    let mut take = |len: usize| -> Vec<f64> {
        let values = bytes[offset..offset + 8 * len]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        offset += 8 * len;
        values
    };
    let mean = take(dim);
    let eigenvalues = take(count);
    let components: Vec<Vec<f64>> = (0..count).map(|_| take(dim)).collect();
    PcaModel::from_parts(mean, eigenvalues, components, dim).map_err(|e| e.to_string())
}

pub fn write_model(path: &Path, model: &PcaModel) -> DataResult<()> {
    fs::write(path, encode_model(model)).map_err(|e| DataError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

pub fn read_model(path: &Path) -> DataResult<PcaModel> {
    let bytes = fs::read(path).map_err(|e| DataError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    decode_model(&bytes).map_err(|reason| DataError::UnsupportedFormat {
        path: path.to_path_buf(),
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use palmid_core::pca_fit;
    use rand::{Rng, SeedableRng};

    #[test]
    fn round_trip_is_bit_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x10de1);
        let vectors: Vec<Vec<f64>> = (0..12)
            .map(|_| (0..7).map(|_| rng.random_range(-100.0..100.0)).collect())
            .collect();
        let model = pca_fit(&vectors).unwrap();
        let decoded = decode_model(&encode_model(&model)).unwrap();
        assert_eq!(decoded.mean(), model.mean());
        assert_eq!(decoded.eigenvalues(), model.eigenvalues());
        assert_eq!(decoded.components(), model.components());
        assert_eq!(decoded.dim(), model.dim());
    }

    #[test]
    fn rejects_corrupt_payloads() {
        let model = pca_fit(&[vec![0.0, 1.0], vec![2.0, 3.0], vec![1.0, 0.0]]).unwrap();
        let mut bytes = encode_model(&model);
        assert!(decode_model(&bytes[..bytes.len() - 1]).is_err());
        bytes[0] = b'X';
        assert!(decode_model(&bytes).is_err());
        assert!(decode_model(b"short").is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.pca");
        let model = pca_fit(&[vec![0.0, 1.0], vec![2.0, 3.0], vec![1.0, 0.0]]).unwrap();
        write_model(&path, &model).unwrap();
        let loaded = read_model(&path).unwrap();
        assert_eq!(loaded.eigenvalues(), model.eigenvalues());
    }
}
