//! Property tests for the block transforms: energy conservation,
//! linearity, reconstruction, and the feature-matrix dimensional contract.

use palmid_core::{
    dwt2_db2, idwt2_db2, image_features, subband_energies, Block, Dct16, FeatureExtractor,
    GrayImage, ZIGZAG_ORDER,
};
use proptest::prelude::*;

fn block_strategy() -> impl Strategy<Value = Block> {
    prop::collection::vec(0.0..=255.0f64, 256).prop_map(|v| Block::from_fn(|m, n| v[m * 16 + n]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dct_preserves_energy(block in block_strategy()) {
        let coeffs = Dct16::new().forward(&block);
        let be = block.energy();
        let ce = coeffs.energy();
        let rel = (be - ce).abs() / be.max(1e-30);
        prop_assert!(rel <= 1e-9, "Parseval drift {rel:e}");
    }

    #[test]
    fn dct_is_linear(x in block_strategy(), y in block_strategy(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let plan = Dct16::new();
        let combined = plan.forward(&Block::from_fn(|m, n| {
            a * x.values[m][n] + b * y.values[m][n]
        }));
        let fx = plan.forward(&x);
        let fy = plan.forward(&y);
        for u in 0..16 {
            for v in 0..16 {
                let expected = a * fx.values[u][v] + b * fy.values[u][v];
                prop_assert!((combined.values[u][v] - expected).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn wavelet_partitions_energy(block in block_strategy()) {
        let pyramid = dwt2_db2(&block, 3).unwrap();
        let be = block.energy();
        let rel = (pyramid.total_energy() - be).abs() / be.max(1e-30);
        prop_assert!(rel <= 1e-9, "partition drift {rel:e}");

        let details: f64 = subband_energies(&pyramid).iter().sum();
        let with_ll = details + pyramid.final_ll().energy();
        prop_assert!((with_ll - be).abs() / be.max(1e-30) <= 1e-9);
    }

    #[test]
    fn wavelet_reconstructs_exactly(block in block_strategy()) {
        let pyramid = dwt2_db2(&block, 3).unwrap();
        let restored = idwt2_db2(&pyramid);
        for (a, b) in block.values.iter().flatten().zip(restored.values.iter().flatten()) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn feature_matrix_dimensions_follow_tiling(a in 1usize..5, b in 1usize..5, fill in 0.0..255.0f64) {
        let img = GrayImage::from_fn(16 * a, 16 * b, |r, c| {
            (fill + (r * 7 + c * 3) as f64) % 255.0
        }).unwrap();
        let fm = image_features(&img);
        prop_assert_eq!(fm.rows(), 18);
        prop_assert_eq!(fm.block_count(), a * b);
        prop_assert_eq!(fm.dim(), 18 * a * b);
    }

    #[test]
    fn single_tile_edit_touches_one_column(which in 0usize..16, delta in 1.0..100.0f64) {
        let base = GrayImage::from_fn(64, 64, |r, c| ((r * 31 + c * 17) % 251) as f64).unwrap();
        let (ty, tx) = (which / 4, which % 4);
        let edited = GrayImage::from_fn(64, 64, |r, c| {
            let inside = (ty * 16..(ty + 1) * 16).contains(&r) && (tx * 16..(tx + 1) * 16).contains(&c);
            base.get(r, c) + if inside { delta } else { 0.0 }
        }).unwrap();
        let fa = image_features(&base);
        let fb = image_features(&edited);
        let changed: Vec<usize> = (0..16).filter(|&m| fa.column(m) != fb.column(m)).collect();
        prop_assert_eq!(changed, vec![which]);
    }

    #[test]
    fn extractor_determinism(block in block_strategy()) {
        let ext = FeatureExtractor::new();
        prop_assert_eq!(ext.block_features(&block), ext.block_features(&block));
    }
}

#[test]
fn zigzag_scan_is_a_permutation_of_all_positions() {
    let mut seen = [false; 256];
    for &(r, c) in ZIGZAG_ORDER.iter() {
        let idx = r as usize * 16 + c as usize;
        assert!(!seen[idx]);
        seen[idx] = true;
    }
    assert!(seen.iter().all(|&s| s));
}
