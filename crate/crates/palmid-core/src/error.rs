use thiserror::Error;

/// Errors raised by feature extraction, PCA, and classification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("image dimensions {width}x{height} are not positive multiples of 16")]
    DimensionNotMultipleOf16 { width: usize, height: usize },

    #[error("pixel buffer holds {got} values, expected {expected}")]
    PixelCountMismatch { expected: usize, got: usize },

    #[error("pixel value at index {index} is not finite")]
    NonFinitePixel { index: usize },

    #[error("coefficient count {count} is outside 1..={max}")]
    CountOutOfRange { count: usize, max: usize },

    #[error("decomposition depth {levels} is unsupported for 16x16 blocks (only 3)")]
    UnsupportedDepth { levels: usize },

    #[error("subband has {got} coefficients, expected {expected}")]
    BadSubbandShape { expected: usize, got: usize },

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("vector length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("component count {k} is outside 1..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("all eigenvalues are zero; retained energy is undefined")]
    DegenerateSpectrum,

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    EigenDidNotConverge { sweeps: usize },

    #[error("probe dimension {got} does not match gallery dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("spectrum count {got} does not match gallery spectrum count {expected}")]
    SpectrumCountMismatch { expected: usize, got: usize },

    #[error("gallery has no entries")]
    EmptyGallery,

    #[error("bad vote weights: {reason}")]
    BadWeights { reason: &'static str },

    #[error("operation requires a raw-feature gallery, not a PCA-projected one")]
    RawGalleryRequired,

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
