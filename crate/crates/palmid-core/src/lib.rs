//! Core palmprint identification algorithms.
//!
//! The pipeline cuts each grayscale ROI into 16x16 blocks and describes
//! every block by its leading zig-zag DCT coefficients together with the
//! energies of a three-level Daubechies-2 wavelet decomposition. The
//! per-block vectors concatenate into one feature vector per image, which
//! feeds either a minimum-distance matcher (optionally in PCA coordinates)
//! or a per-feature majority-voting matcher across all spectral bands.
//!
//! The crate is `no_std` (with `alloc`): it performs no IO and touches no
//! platform APIs. File formats, dataset handling, and the evaluation
//! harness live in the companion `palmid` crate.

#![no_std]
// Indexed loops mirror the transform formulas; iterator rewrites obscure them.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod block;
mod classify;
mod dct;
mod eigen;
mod error;
mod features;
mod image;
mod pca;
mod wavelet;
mod zigzag;

pub use block::{Block, BLOCK_DIM};
pub use classify::{
    evaluate, majority_vote_classify, majority_vote_with, min_distance_classify, Gallery,
    GalleryEntry, GalleryMode, LabeledProbe, Method, ScorePooling, Scoreboard, VoteGranularity,
    VoteOptions,
};
pub use dct::{dct2, Dct16, DctCoefficients};
pub use error::{Error, Result};
pub use features::{
    apply_standardizer, block_features, block_partition, fit_standardizer, image_features,
    FeatureExtractor, FeatureMatrix, Standardizer, FEATURES_PER_BLOCK,
};
pub use image::GrayImage;
pub use pca::{
    pca_fit, pca_project, pca_reconstruct, retained_energy, PcaModel, EIGENVALUE_CLAMP_REL,
};
pub use wavelet::{
    dwt2_db2, idwt2_db2, subband_energies, DetailBands, Subband, SubbandPyramid, DWT_LEVELS,
};
pub use zigzag::{zigzag_take, DEFAULT_DCT_COUNT, ZIGZAG_ORDER};
