//! Seeded synthetic multispectral datasets with controlled class structure.
//!
//! Each person has one smooth prototype field per spectrum (a sum of
//! random low-frequency 2D cosines rescaled to [0, 255]); samples are the
//! prototype plus i.i.d. Gaussian pixel noise, clamped and quantized to
//! the 8-bit range so in-memory data matches a PGM round trip exactly.

use std::f64::consts::TAU;

use palmid_core::GrayImage;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dataset::{Dataset, PalmSample, Spectrum};
use crate::error::{DataError, DataResult};

/// Number of random cosine terms per prototype field.
const PROTOTYPE_TERMS: usize = 8;

/// Parameters of a synthetic dataset; a pure function of this struct.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub persons: usize,
    pub samples_per_person: usize,
    pub width: usize,
    pub height: usize,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    /// Desk-scale default: 50 persons, 12 samples, 128x128, sigma 8, seed 42.
    fn default() -> Self {
        Self {
            persons: 50,
            samples_per_person: 12,
            width: 128,
            height: 128,
            noise_sigma: 8.0,
            seed: 42,
        }
    }
}

/// One smooth band-limited field in [0, 255].
fn prototype(width: usize, height: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    struct Term {
        amplitude: f64,
        fx: f64,
        fy: f64,
        phase_x: f64,
        phase_y: f64,
    }
    let terms: Vec<Term> = (0..PROTOTYPE_TERMS)
        .map(|_| Term {
            amplitude: rng.random_range(0.4..1.0),
            fx: rng.random_range(0.5..4.0),
            fy: rng.random_range(0.5..4.0),
            phase_x: rng.random_range(0.0..TAU),
            phase_y: rng.random_range(0.0..TAU),
        })
        .collect();

    let mut field = vec![0.0; width * height];
    for y in 0..height {
        for x in 0..width {
            let mut v = 0.0;
            for t in &terms {
                v += t.amplitude
                    * (TAU * t.fx * x as f64 / width as f64 + t.phase_x).cos()
                    * (TAU * t.fy * y as f64 / height as f64 + t.phase_y).cos();
            }
            field[y * width + x] = v;
        }
    }

    let min = field.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = field.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max - min < 1e-12 {
        field.fill(128.0);
    } else {
        for v in field.iter_mut() {
            *v = (*v - min) / (max - min) * 255.0;
        }
    }
    field
}

/// RNG stream ids: two independent streams per (person, spectrum), one for
/// the prototype and one for the noise of all its samples.
fn stream_id(person: usize, spectrum: usize, noise: bool) -> u64 {
    2 * (person as u64 * Spectrum::ALL.len() as u64 + spectrum as u64) + noise as u64
}

/// Generates a dataset deterministically from the parameters.
pub fn generate_synthetic(spec: &SyntheticSpec) -> DataResult<Dataset> {
    if spec.persons < 2 {
        return Err(DataError::InvalidParameter(format!(
            "persons must be at least 2, got {}",
            spec.persons
        )));
    }
    if spec.samples_per_person == 0 {
        return Err(DataError::InvalidParameter(
            "samples_per_person must be positive".into(),
        ));
    }
    if spec.width == 0
        || spec.height == 0
        || !spec.width.is_multiple_of(16)
        || !spec.height.is_multiple_of(16)
    {
        return Err(DataError::InvalidDimensions(format!(
            "{}x{} (must be positive multiples of 16)",
            spec.width, spec.height
        )));
    }
    if !spec.noise_sigma.is_finite() || spec.noise_sigma < 0.0 {
        return Err(DataError::InvalidParameter(format!(
            "noise_sigma must be finite and non-negative, got {}",
            spec.noise_sigma
        )));
    }

    let mut samples = Vec::with_capacity(spec.persons * spec.samples_per_person);
    let pad = (spec.persons - 1).to_string().len().max(3);
    for person in 0..spec.persons {
        let person_id = format!("person{person:0pad$}");
        let mut spectra_protos = Vec::with_capacity(4);
        let mut noise_rngs = Vec::with_capacity(4);
        for spectrum in 0..Spectrum::ALL.len() {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(stream_id(person, spectrum, false));
            spectra_protos.push(prototype(spec.width, spec.height, &mut rng));
            let mut noise = ChaCha8Rng::seed_from_u64(spec.seed);
            noise.set_stream(stream_id(person, spectrum, true));
            noise_rngs.push(noise);
        }
        for sample_index in 0..spec.samples_per_person {
            let mut spectra = Vec::with_capacity(4);
            for (proto, noise) in spectra_protos.iter().zip(noise_rngs.iter_mut()) {
                let pixels: Vec<f64> = proto
                    .iter()
                    .map(|&p| {
                        let n: f64 = noise.sample(StandardNormal);
                        (p + spec.noise_sigma * n).clamp(0.0, 255.0).round()
                    })
                    .collect();
                spectra.push(
                    GrayImage::new(spec.width, spec.height, pixels)
                        .expect("validated dimensions"),
                );
            }
            samples.push(PalmSample {
                person_id: person_id.clone(),
                sample_index,
                spectra,
            });
        }
    }
    Dataset::new(samples)
}
