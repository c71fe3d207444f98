//! Identification matchers: minimum-distance template matching and
//! per-feature majority voting.
//!
//! Voting gives every scalar feature one vote per spectrum: the gallery
//! entry whose value is nearest to the probe's receives the feature's
//! weight, and the entry with the highest tally wins. All tie rules are
//! fixed so classification is fully deterministic.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pca::{pca_project, PcaModel};

/// One enrolled training sample: a label plus one feature vector per spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct GalleryEntry {
    pub person_id: String,
    pub sample_index: usize,
    pub features: Vec<Vec<f64>>,
}

/// How gallery features are matched.
#[derive(Debug, Clone)]
pub enum GalleryMode {
    /// Distances on the raw feature vectors.
    Raw,
    /// Per-spectrum PCA projection to `k` coordinates before distances.
    Pca { models: Vec<PcaModel>, k: usize },
}

/// An immutable set of enrolled samples, validated for uniform dimensions.
#[derive(Debug, Clone)]
pub struct Gallery {
    entries: Vec<GalleryEntry>,
    feature_dim: usize,
    spectra: usize,
    mode: GalleryMode,
    /// Pca mode: per-entry per-spectrum projected vectors.
    projected: Option<Vec<Vec<Vec<f64>>>>,
    /// Raw mode: per-spectrum feature-major layout, `columns[s][i * len + e]`,
    /// so the per-feature vote scan runs over contiguous memory.
    columns: Option<Vec<Vec<f64>>>,
}

fn validate_entries(entries: &[GalleryEntry]) -> Result<(usize, usize)> {
    let first = entries.first().ok_or(Error::EmptyGallery)?;
    let spectra = first.features.len();
    if spectra == 0 {
        return Err(Error::SpectrumCountMismatch {
            expected: 1,
            got: 0,
        });
    }
    let feature_dim = first.features[0].len();
    for entry in entries {
        if entry.features.len() != spectra {
            return Err(Error::SpectrumCountMismatch {
                expected: spectra,
                got: entry.features.len(),
            });
        }
        for f in &entry.features {
            if f.len() != feature_dim {
                return Err(Error::DimensionMismatch {
                    expected: feature_dim,
                    got: f.len(),
                });
            }
        }
    }
    Ok((spectra, feature_dim))
}

impl Gallery {
    /// Builds a raw-feature gallery.
    pub fn new(entries: Vec<GalleryEntry>) -> Result<Self> {
        let (spectra, feature_dim) = validate_entries(&entries)?;
        let len = entries.len();
        let mut columns = Vec::with_capacity(spectra);
        for s in 0..spectra {
            let mut col = vec![0.0; feature_dim * len];
            for (e, entry) in entries.iter().enumerate() {
                for (i, &x) in entry.features[s].iter().enumerate() {
                    col[i * len + e] = x;
                }
            }
            columns.push(col);
        }
        Ok(Self {
            entries,
            feature_dim,
            spectra,
            mode: GalleryMode::Raw,
            projected: None,
            columns: Some(columns),
        })
    }

    /// Builds a gallery whose matching runs in per-spectrum PCA coordinates.
    /// Entries are projected once here; probes are projected per query.
    pub fn with_pca(entries: Vec<GalleryEntry>, models: Vec<PcaModel>, k: usize) -> Result<Self> {
        let (spectra, feature_dim) = validate_entries(&entries)?;
        if models.len() != spectra {
            return Err(Error::SpectrumCountMismatch {
                expected: spectra,
                got: models.len(),
            });
        }
        for model in &models {
            if model.dim() != feature_dim {
                return Err(Error::DimensionMismatch {
                    expected: feature_dim,
                    got: model.dim(),
                });
            }
            if k == 0 || k > model.component_count() {
                return Err(Error::KOutOfRange {
                    k,
                    max: model.component_count(),
                });
            }
        }
        let mut projected = Vec::with_capacity(entries.len());
        for entry in &entries {
            let mut per_spectrum = Vec::with_capacity(spectra);
            for (f, model) in entry.features.iter().zip(models.iter()) {
                per_spectrum.push(pca_project(model, f, k)?);
            }
            projected.push(per_spectrum);
        }
        Ok(Self {
            entries,
            feature_dim,
            spectra,
            mode: GalleryMode::Pca { models, k },
            projected: Some(projected),
            columns: None,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[GalleryEntry] {
        &self.entries
    }

    /// Raw feature dimension per spectrum (before any projection).
    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn spectra(&self) -> usize {
        self.spectra
    }

    pub fn mode(&self) -> &GalleryMode {
        &self.mode
    }

    pub fn person_id(&self, entry: usize) -> &str {
        &self.entries[entry].person_id
    }

    fn check_probe(&self, probe: &[Vec<f64>]) -> Result<()> {
        if probe.len() != self.spectra {
            return Err(Error::SpectrumCountMismatch {
                expected: self.spectra,
                got: probe.len(),
            });
        }
        for f in probe {
            if f.len() != self.feature_dim {
                return Err(Error::DimensionMismatch {
                    expected: self.feature_dim,
                    got: f.len(),
                });
            }
        }
        Ok(())
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Distance used for ranking and tie-breaks: per-spectrum Euclidean norms,
/// summed over spectra.
fn raw_total_distance(gallery: &Gallery, probe: &[Vec<f64>], entry: usize) -> f64 {
    gallery.entries[entry]
        .features
        .iter()
        .zip(probe.iter())
        .map(|(e, p)| euclid(e, p))
        .sum()
}

/// Assigns the probe to the gallery entry with the smallest summed
/// per-spectrum Euclidean distance; ties go to the lowest entry index.
/// In PCA mode both sides are compared in projection coordinates.
pub fn min_distance_classify<'g>(
    gallery: &'g Gallery,
    probe: &[Vec<f64>],
) -> Result<(&'g str, usize)> {
    gallery.check_probe(probe)?;

    let distance_to = |entry: usize, projected_probe: Option<&Vec<Vec<f64>>>| -> f64 {
        match projected_probe {
            None => raw_total_distance(gallery, probe, entry),
            Some(pp) => gallery.projected.as_ref().unwrap()[entry]
                .iter()
                .zip(pp.iter())
                .map(|(e, p)| euclid(e, p))
                .sum(),
        }
    };

    let projected_probe = match &gallery.mode {
        GalleryMode::Raw => None,
        GalleryMode::Pca { models, k } => {
            let mut pp = Vec::with_capacity(gallery.spectra);
            for (f, model) in probe.iter().zip(models.iter()) {
                pp.push(pca_project(model, f, *k)?);
            }
            Some(pp)
        }
    };

    let mut best = 0;
    let mut best_dist = distance_to(0, projected_probe.as_ref());
    for e in 1..gallery.len() {
        let d = distance_to(e, projected_probe.as_ref());
        if d < best_dist {
            best = e;
            best_dist = d;
        }
    }
    Ok((gallery.person_id(best), best))
}

/// Vote tallies and tie-break distances for every gallery entry, plus the
/// winning entry index. Tallies are stored as `f64` so weighted voting is
/// representable; under uniform weights they are exact whole counts.
#[derive(Debug, Clone, PartialEq)]
pub struct Scoreboard {
    scores: Vec<f64>,
    tiebreak_distances: Vec<f64>,
    winner: usize,
}

impl Scoreboard {
    /// Tally per gallery entry index.
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// Summed per-spectrum Euclidean distance per entry, used to resolve
    /// score ties.
    pub fn tiebreak_distances(&self) -> &[f64] {
        &self.tiebreak_distances
    }

    pub fn winner(&self) -> usize {
        self.winner
    }

    /// Entry indices sorted by descending score (distance, then index,
    /// breaking ties), ready for export.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.scores.len()).collect();
        order.sort_by(|&a, &b| {
            self.scores[b]
                .partial_cmp(&self.scores[a])
                .unwrap()
                .then(
                    self.tiebreak_distances[a]
                        .partial_cmp(&self.tiebreak_distances[b])
                        .unwrap(),
                )
                .then(a.cmp(&b))
        });
        order
    }
}

/// What one vote covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VoteGranularity {
    /// One vote per scalar feature (the default).
    #[default]
    Scalar,
    /// One vote per block column of the given height, matched by Euclidean
    /// distance on the whole column.
    BlockColumn(usize),
}

/// How tallies turn into a winner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScorePooling {
    /// The single entry with the highest tally wins.
    #[default]
    PerEntry,
    /// Tallies are summed per person first; the best entry of the winning
    /// person is reported.
    PerPerson,
}

/// Extended voting switches. `Default` reproduces plain uniform-weight
/// per-feature voting.
#[derive(Debug, Clone, Copy, Default)]
pub struct VoteOptions<'a> {
    pub weights: Option<&'a [f64]>,
    pub granularity: VoteGranularity,
    pub pooling: ScorePooling,
}

/// Per-feature nearest-neighbor voting across all spectra with uniform or
/// caller-supplied weights. Requires a raw gallery.
pub fn majority_vote_classify<'g>(
    gallery: &'g Gallery,
    probe: &[Vec<f64>],
    weights: Option<&[f64]>,
) -> Result<(&'g str, Scoreboard)> {
    majority_vote_with(
        gallery,
        probe,
        &VoteOptions {
            weights,
            ..VoteOptions::default()
        },
    )
}

/// Voting with explicit granularity and pooling switches.
pub fn majority_vote_with<'g>(
    gallery: &'g Gallery,
    probe: &[Vec<f64>],
    options: &VoteOptions,
) -> Result<(&'g str, Scoreboard)> {
    gallery.check_probe(probe)?;
    let columns = gallery.columns.as_ref().ok_or(Error::RawGalleryRequired)?;
    let len = gallery.len();
    let dim = gallery.feature_dim;

    let mut scores = vec![0.0; len];
    match options.granularity {
        VoteGranularity::Scalar => {
            let uniform;
            let weights: &[f64] = match options.weights {
                Some(w) => {
                    if w.len() != dim {
                        return Err(Error::BadWeights {
                            reason: "weight vector length must equal the feature dimension",
                        });
                    }
                    if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
                        return Err(Error::BadWeights {
                            reason: "weights must be finite and non-negative",
                        });
                    }
                    w
                }
                None => {
                    uniform = vec![1.0; dim];
                    &uniform
                }
            };
            for (spectrum_columns, probe_features) in columns.iter().zip(probe.iter()) {
                for (i, &p) in probe_features.iter().enumerate() {
                    let col = &spectrum_columns[i * len..(i + 1) * len];
                    let mut best = 0;
                    let mut best_d = (p - col[0]).abs();
                    for (e, &x) in col.iter().enumerate().skip(1) {
                        let d = (p - x).abs();
                        if d < best_d {
                            best = e;
                            best_d = d;
                        }
                    }
                    scores[best] += weights[i];
                }
            }
        }
        VoteGranularity::BlockColumn(rows) => {
            if options.weights.is_some() {
                return Err(Error::BadWeights {
                    reason: "per-feature weights apply to scalar granularity only",
                });
            }
            if rows == 0 || !dim.is_multiple_of(rows) {
                return Err(Error::InvalidParameter(
                    "block column height must divide the feature dimension",
                ));
            }
            for s in 0..gallery.spectra {
                for start in (0..dim).step_by(rows) {
                    let p = &probe[s][start..start + rows];
                    let mut best = 0;
                    let mut best_d = f64::INFINITY;
                    for (e, entry) in gallery.entries.iter().enumerate() {
                        let d = euclid(p, &entry.features[s][start..start + rows]);
                        if d < best_d {
                            best = e;
                            best_d = d;
                        }
                    }
                    scores[best] += 1.0;
                }
            }
        }
    }

    let tiebreak: Vec<f64> = (0..len)
        .map(|e| raw_total_distance(gallery, probe, e))
        .collect();

    let better = |a: usize, b: usize| -> bool {
        // Is entry `a` strictly better than `b`?
        scores[a] > scores[b]
            || (scores[a] == scores[b] && tiebreak[a] < tiebreak[b])
    };

    let winner = match options.pooling {
        ScorePooling::PerEntry => {
            let mut best = 0;
            for e in 1..len {
                if better(e, best) {
                    best = e;
                }
            }
            best
        }
        ScorePooling::PerPerson => {
            // Pool tallies per person, deterministically keyed by the
            // person's first entry index.
            let mut leader: Vec<usize> = Vec::new(); // first entry per person
            let mut pooled: Vec<f64> = Vec::new();
            let mut person_of: Vec<usize> = vec![0; len];
            for e in 0..len {
                let id = gallery.person_id(e);
                match leader.iter().position(|&l| gallery.person_id(l) == id) {
                    Some(p) => {
                        person_of[e] = p;
                        pooled[p] += scores[e];
                    }
                    None => {
                        person_of[e] = leader.len();
                        leader.push(e);
                        pooled.push(scores[e]);
                    }
                }
            }
            let mut best_person = 0;
            let mut best_person_dist = f64::INFINITY;
            let dist_of_person = |p: usize| -> f64 {
                (0..len)
                    .filter(|&e| person_of[e] == p)
                    .map(|e| tiebreak[e])
                    .fold(f64::INFINITY, f64::min)
            };
            for p in 0..leader.len() {
                let d = dist_of_person(p);
                if p == 0 {
                    best_person_dist = d;
                    continue;
                }
                if pooled[p] > pooled[best_person]
                    || (pooled[p] == pooled[best_person] && d < best_person_dist)
                {
                    best_person = p;
                    best_person_dist = d;
                }
            }
            // Best entry within the winning person.
            let mut best = leader[best_person];
            for e in 0..len {
                if person_of[e] == best_person && better(e, best) {
                    best = e;
                }
            }
            best
        }
    };

    let scoreboard = Scoreboard {
        scores,
        tiebreak_distances: tiebreak,
        winner,
    };
    Ok((gallery.person_id(winner), scoreboard))
}

/// Classification method selector for evaluation runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    MinDistance,
    MajorityVote,
}

/// A test sample with its ground-truth label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledProbe {
    pub person_id: String,
    pub features: Vec<Vec<f64>>,
}

/// Fraction of probes identified as their true person.
pub fn evaluate(gallery: &Gallery, probes: &[LabeledProbe], method: Method) -> Result<f64> {
    if probes.is_empty() {
        return Err(Error::InvalidParameter("no probes to evaluate"));
    }
    let mut correct = 0usize;
    for probe in probes {
        let predicted = match method {
            Method::MinDistance => min_distance_classify(gallery, &probe.features)?.0,
            Method::MajorityVote => majority_vote_classify(gallery, &probe.features, None)?.0,
        };
        if predicted == probe.person_id {
            correct += 1;
        }
    }
    Ok(correct as f64 / probes.len() as f64)
}
