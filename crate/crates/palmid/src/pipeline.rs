//! Dataset-to-features plumbing shared by the CLI and the harness.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use palmid_core::{FeatureExtractor, GalleryEntry, LabeledProbe};

use crate::dataset::{Dataset, PalmSample, Spectrum};
use crate::error::{DataError, DataResult};

/// Flattened per-spectrum feature vectors of one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleFeatures {
    pub person_id: String,
    pub sample_index: usize,
    /// One length-D vector per spectrum, blue/green/red/nir order.
    pub per_spectrum: Vec<Vec<f64>>,
}

/// Extracts flattened feature vectors for every sample and spectrum.
pub fn extract_features(dataset: &Dataset, extractor: &FeatureExtractor) -> Vec<SampleFeatures> {
    dataset
        .samples()
        .iter()
        .map(|sample| SampleFeatures {
            person_id: sample.person_id.clone(),
            sample_index: sample.sample_index,
            per_spectrum: sample
                .spectra
                .iter()
                .map(|img| extractor.image_features(img).into_flat())
                .collect(),
        })
        .collect()
}

/// Maps split sample references back to their extracted features.
pub fn select_features<'f>(
    features: &'f [SampleFeatures],
    samples: &[&PalmSample],
) -> Vec<&'f SampleFeatures> {
    let by_key: HashMap<(&str, usize), &SampleFeatures> = features
        .iter()
        .map(|f| ((f.person_id.as_str(), f.sample_index), f))
        .collect();
    samples
        .iter()
        .map(|s| by_key[&(s.person_id.as_str(), s.sample_index)])
        .collect()
}

/// Gallery entries borrowing nothing: features are cloned into the gallery.
pub fn to_gallery_entries(features: &[&SampleFeatures]) -> Vec<GalleryEntry> {
    features
        .iter()
        .map(|f| GalleryEntry {
            person_id: f.person_id.clone(),
            sample_index: f.sample_index,
            features: f.per_spectrum.clone(),
        })
        .collect()
}

pub fn to_probes(features: &[&SampleFeatures]) -> Vec<LabeledProbe> {
    features
        .iter()
        .map(|f| LabeledProbe {
            person_id: f.person_id.clone(),
            features: f.per_spectrum.clone(),
        })
        .collect()
}

/// Renders the feature table as CSV: one row per (sample, spectrum), with
/// header `person_id,sample_index,spectrum,f_0001..f_<D>`.
pub fn features_to_csv(features: &[SampleFeatures]) -> String {
    let dim = features
        .first()
        .map(|f| f.per_spectrum[0].len())
        .unwrap_or(0);
    let width = dim.to_string().len().max(4);
    let mut out = String::from("person_id,sample_index,spectrum");
    for i in 1..=dim {
        out.push_str(&format!(",f_{i:0width$}"));
    }
    out.push('\n');
    for f in features {
        for (vector, spectrum) in f.per_spectrum.iter().zip(Spectrum::ALL) {
            out.push_str(&format!(
                "{},{},{}",
                f.person_id,
                f.sample_index,
                spectrum.name()
            ));
            for v in vector {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
    }
    out
}

pub fn write_features_csv(path: &Path, features: &[SampleFeatures]) -> DataResult<()> {
    fs::write(path, features_to_csv(features)).map_err(|e| DataError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}
