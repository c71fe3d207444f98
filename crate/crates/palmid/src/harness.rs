//! Evaluation scenarios: voting accuracy across training fractions and
//! minimum-distance accuracy across PCA component counts.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use palmid_core::{
    evaluate, pca_fit, FeatureExtractor, Gallery, Method, PcaModel, Standardizer,
};

use crate::dataset::{load_dataset, split, Dataset, SplitMode, SplitSpec};
use crate::error::{DataError, Error, Result};
use crate::pipeline::{
    extract_features, select_features, to_gallery_entries, to_probes, SampleFeatures,
};
use crate::report::{Report, ReportRow};
use crate::synth::{generate_synthetic, SyntheticSpec};

/// A per-person training fraction such as 4/12: four of twelve samples
/// enroll, the rest probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    pub train: usize,
    pub of: usize,
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.train, self.of)
    }
}

impl FromStr for Fraction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| format!("'{s}' is not of the form a/b"))?;
        let train = a.trim().parse().map_err(|_| format!("bad numerator in '{s}'"))?;
        let of = b.trim().parse().map_err(|_| format!("bad denominator in '{s}'"))?;
        if train == 0 || train >= of {
            return Err(format!("fraction '{s}' must satisfy 0 < a < b"));
        }
        Ok(Fraction { train, of })
    }
}

/// Where the evaluation data comes from.
#[derive(Debug, Clone)]
pub enum DataSource {
    Directory(PathBuf),
    Synthetic(SyntheticSpec),
}

/// Full description of an evaluation run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: DataSource,
    pub splits: Vec<Fraction>,
    pub split_mode: SplitMode,
    /// PCA component counts to sweep (pca-curve scenario only).
    pub ks: Vec<usize>,
    pub dct_count: usize,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// The default desk-scale synthetic configuration.
    pub fn synthetic_default() -> Self {
        Self {
            source: DataSource::Synthetic(SyntheticSpec::default()),
            splits: vec![
                Fraction { train: 4, of: 12 },
                Fraction { train: 5, of: 12 },
                Fraction { train: 6, of: 12 },
            ],
            split_mode: SplitMode::FirstN,
            ks: vec![],
            dct_count: palmid_core::DEFAULT_DCT_COUNT,
            out: None,
        }
    }
}

pub fn load_source(source: &DataSource) -> Result<Dataset> {
    match source {
        DataSource::Directory(path) => Ok(load_dataset(path)?),
        DataSource::Synthetic(spec) => Ok(generate_synthetic(spec)?),
    }
}

fn extractor_for(config: &RunConfig) -> Result<FeatureExtractor> {
    FeatureExtractor::with_dct_count(config.dct_count)
        .map_err(|e| Error::Usage(format!("invalid --dct-count: {e}")))
}

fn check_fraction(dataset: &Dataset, fraction: &Fraction) -> Result<SplitSpec> {
    if fraction.of != dataset.samples_per_person() {
        return Err(Error::Data(DataError::InvalidSplit(format!(
            "fraction {fraction} does not match the dataset's {} samples per person",
            dataset.samples_per_person()
        ))));
    }
    Ok(SplitSpec {
        train_count: fraction.train,
        mode: SplitMode::FirstN,
    })
}

/// All-features majority voting at each configured training fraction.
pub fn run_table1(config: &RunConfig) -> Result<Report> {
    let dataset = load_source(&config.source)?;
    let extractor = extractor_for(config)?;
    let features = extract_features(&dataset, &extractor);

    let mut report = Report::default();
    for fraction in &config.splits {
        let mut spec = check_fraction(&dataset, fraction)?;
        spec.mode = config.split_mode;
        let (train, test) = split(&dataset, &spec)?;
        let started = Instant::now();
        let gallery = Gallery::new(to_gallery_entries(&select_features(&features, &train)))?;
        let probes = to_probes(&select_features(&features, &test));
        let accuracy = evaluate(&gallery, &probes, Method::MajorityVote)?;
        report.rows.push(ReportRow {
            scenario: "table1".into(),
            split: fraction.to_string(),
            k: None,
            accuracy,
            probes: probes.len(),
            seconds: started.elapsed().as_secs_f64(),
        });
    }
    Ok(report)
}

/// Standardized train/test features plus the per-spectrum PCA models fitted
/// on the training side.
pub struct PcaInputs {
    pub train: Vec<SampleFeatures>,
    pub test: Vec<SampleFeatures>,
    pub standardizers: Vec<Standardizer>,
    pub models: Vec<PcaModel>,
}

impl PcaInputs {
    /// Largest component count every spectrum's model can serve.
    pub fn max_k(&self) -> usize {
        self.models
            .iter()
            .map(PcaModel::component_count)
            .min()
            .unwrap_or(0)
    }
}

/// Splits, standardizes per spectrum, and fits one PCA model per spectrum.
pub fn prepare_pca_inputs(
    dataset: &Dataset,
    features: &[SampleFeatures],
    fraction: &Fraction,
    mode: SplitMode,
) -> Result<PcaInputs> {
    let mut spec = check_fraction(dataset, fraction)?;
    spec.mode = mode;
    let (train, test) = split(dataset, &spec)?;
    let train = select_features(features, &train);
    let test = select_features(features, &test);

    let spectra = train[0].per_spectrum.len();
    let mut standardizers = Vec::with_capacity(spectra);
    let mut models = Vec::with_capacity(spectra);
    for s in 0..spectra {
        let vectors: Vec<Vec<f64>> = train.iter().map(|f| f.per_spectrum[s].clone()).collect();
        let standardizer = Standardizer::fit(&vectors)?;
        let standardized: Vec<Vec<f64>> = vectors
            .iter()
            .map(|v| standardizer.apply(v))
            .collect::<palmid_core::Result<_>>()?;
        models.push(pca_fit(&standardized)?);
        standardizers.push(standardizer);
    }

    let standardize_all = |set: &[&SampleFeatures]| -> Result<Vec<SampleFeatures>> {
        set.iter()
            .map(|f| {
                let per_spectrum = f
                    .per_spectrum
                    .iter()
                    .zip(standardizers.iter())
                    .map(|(v, s)| s.apply(v))
                    .collect::<palmid_core::Result<Vec<_>>>()?;
                Ok(SampleFeatures {
                    person_id: f.person_id.clone(),
                    sample_index: f.sample_index,
                    per_spectrum,
                })
            })
            .collect()
    };

    Ok(PcaInputs {
        train: standardize_all(&train)?,
        test: standardize_all(&test)?,
        standardizers,
        models,
    })
}

/// Minimum-distance accuracy over standardized features without any
/// projection; the full-rank PCA sweep must reproduce this number.
pub fn raw_min_distance_accuracy(inputs: &PcaInputs) -> Result<f64> {
    let train_refs: Vec<&SampleFeatures> = inputs.train.iter().collect();
    let test_refs: Vec<&SampleFeatures> = inputs.test.iter().collect();
    let gallery = Gallery::new(to_gallery_entries(&train_refs))?;
    let probes = to_probes(&test_refs);
    Ok(evaluate(&gallery, &probes, Method::MinDistance)?)
}

/// Minimum-distance accuracy in `k`-dimensional PCA coordinates.
pub fn pca_accuracy(inputs: &PcaInputs, k: usize) -> Result<f64> {
    let train_refs: Vec<&SampleFeatures> = inputs.train.iter().collect();
    let test_refs: Vec<&SampleFeatures> = inputs.test.iter().collect();
    let gallery = Gallery::with_pca(
        to_gallery_entries(&train_refs),
        inputs.models.clone(),
        k,
    )?;
    let probes = to_probes(&test_refs);
    Ok(evaluate(&gallery, &probes, Method::MinDistance)?)
}

/// Accuracy-versus-k sweep: standardize, fit per-spectrum PCA on the
/// training side, then classify by minimum distance at each `k`.
pub fn run_pca_curve(config: &RunConfig) -> Result<Report> {
    let fraction = match config.splits.as_slice() {
        [one] => one,
        _ => {
            return Err(Error::Usage(
                "pca-curve takes exactly one training fraction".into(),
            ))
        }
    };
    if config.ks.is_empty() {
        return Err(Error::Usage("pca-curve needs --k with at least one value".into()));
    }

    let dataset = load_source(&config.source)?;
    let extractor = extractor_for(config)?;
    let features = extract_features(&dataset, &extractor);
    let inputs = prepare_pca_inputs(&dataset, &features, fraction, config.split_mode)?;

    let max_k = inputs.max_k();
    let mut report = Report::default();
    for &k in &config.ks {
        if k == 0 || k > max_k {
            return Err(Error::Usage(format!(
                "k = {k} is outside the usable range 1..={max_k} for this training set"
            )));
        }
        let started = Instant::now();
        let accuracy = pca_accuracy(&inputs, k)?;
        report.rows.push(ReportRow {
            scenario: "pca-curve".into(),
            split: fraction.to_string(),
            k: Some(k),
            accuracy,
            probes: inputs.test.len(),
            seconds: started.elapsed().as_secs_f64(),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> RunConfig {
        RunConfig {
            source: DataSource::Synthetic(SyntheticSpec {
                persons: 6,
                samples_per_person: 4,
                width: 32,
                height: 32,
                noise_sigma: 6.0,
                seed: 11,
            }),
            splits: vec![Fraction { train: 2, of: 4 }],
            split_mode: SplitMode::FirstN,
            ks: vec![],
            dct_count: 9,
            out: None,
        }
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!("4/12".parse::<Fraction>().unwrap(), Fraction { train: 4, of: 12 });
        assert!(" 5 / 12 ".parse::<Fraction>().is_ok());
        for bad in ["", "4", "0/12", "12/12", "13/12", "a/b"] {
            assert!(bad.parse::<Fraction>().is_err(), "{bad} parsed");
        }
    }

    #[test]
    fn table1_report_shape() {
        let report = run_table1(&tiny_config()).unwrap();
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert_eq!(row.scenario, "table1");
        assert_eq!(row.split, "2/4");
        assert_eq!(row.k, None);
        // persons * (samples - train) probes
        assert_eq!(row.probes, 6 * 2);
        assert!((0.0..=1.0).contains(&row.accuracy));
    }

    #[test]
    fn table1_rejects_mismatched_fraction() {
        let mut config = tiny_config();
        config.splits = vec![Fraction { train: 4, of: 12 }];
        let err = run_table1(&config).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn single_person_dataset_scores_trivially_perfect() {
        use crate::dataset::{Dataset, PalmSample, SplitSpec};
        use crate::pipeline::{select_features, to_gallery_entries, to_probes};
        use palmid_core::GrayImage;

        let samples = (0..3)
            .map(|i| PalmSample {
                person_id: "only".into(),
                sample_index: i,
                spectra: (0..4)
                    .map(|s| {
                        GrayImage::from_fn(16, 16, |r, c| ((i * 4 + s + r + c) % 200) as f64)
                            .unwrap()
                    })
                    .collect(),
            })
            .collect();
        let dataset = Dataset::new(samples).unwrap();
        let features = extract_features(&dataset, &FeatureExtractor::new());
        let (train, test) = split(
            &dataset,
            &SplitSpec {
                train_count: 1,
                mode: SplitMode::FirstN,
            },
        )
        .unwrap();
        let gallery = Gallery::new(to_gallery_entries(&select_features(&features, &train))).unwrap();
        let probes = to_probes(&select_features(&features, &test));
        for method in [Method::MajorityVote, Method::MinDistance] {
            assert_eq!(evaluate(&gallery, &probes, method).unwrap(), 1.0);
        }
    }

    #[test]
    fn single_person_dataset_is_rejected_by_synthesis() {
        let mut config = tiny_config();
        config.source = DataSource::Synthetic(SyntheticSpec {
            persons: 1,
            ..SyntheticSpec::default()
        });
        assert!(run_table1(&config).is_err());
    }

    #[test]
    fn pca_curve_rows_ascend_k() {
        let mut config = tiny_config();
        config.ks = vec![3, 8];
        let report = run_pca_curve(&config).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert_eq!(report.rows[0].k, Some(3));
        assert_eq!(report.rows[1].k, Some(8));
        assert_eq!(report.rows[0].probes, report.rows[1].probes);
    }

    #[test]
    fn pca_curve_guards_k_and_splits() {
        let mut config = tiny_config();
        config.ks = vec![];
        assert_eq!(run_pca_curve(&config).unwrap_err().exit_code(), 1);

        let mut config = tiny_config();
        config.ks = vec![100_000];
        assert_eq!(run_pca_curve(&config).unwrap_err().exit_code(), 1);

        let mut config = tiny_config();
        config.splits = vec![Fraction { train: 1, of: 4 }, Fraction { train: 2, of: 4 }];
        config.ks = vec![2];
        assert_eq!(run_pca_curve(&config).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn full_rank_matches_raw_min_distance() {
        let config = tiny_config();
        let dataset = load_source(&config.source).unwrap();
        let features = extract_features(&dataset, &FeatureExtractor::new());
        let inputs = prepare_pca_inputs(
            &dataset,
            &features,
            &Fraction { train: 2, of: 4 },
            SplitMode::FirstN,
        )
        .unwrap();
        let raw = raw_min_distance_accuracy(&inputs).unwrap();
        let full = pca_accuracy(&inputs, inputs.max_k()).unwrap();
        assert!((raw - full).abs() <= 1e-12, "raw {raw} vs full-rank {full}");
    }
}
