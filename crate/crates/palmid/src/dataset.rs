//! Multispectral palmprint datasets: on-disk layout, validation, and
//! train/test splitting.
//!
//! Layout: `<root>/<person_id>/<sample_index>_<spectrum>.pgm` with spectrum
//! one of `blue`, `green`, `red`, `nir` and a zero-padded sample index.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use palmid_core::GrayImage;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{DataError, DataResult};
use crate::pgm::{read_pgm, write_pgm};

/// The four illumination bands of one acquisition, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Spectrum {
    Blue,
    Green,
    Red,
    Nir,
}

impl Spectrum {
    pub const ALL: [Spectrum; 4] = [Spectrum::Blue, Spectrum::Green, Spectrum::Red, Spectrum::Nir];

    /// Lowercase name used in filenames and CSV columns.
    pub fn name(self) -> &'static str {
        match self {
            Spectrum::Blue => "blue",
            Spectrum::Green => "green",
            Spectrum::Red => "red",
            Spectrum::Nir => "nir",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Position in [`Spectrum::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

/// One person-session observation: the same palm under all four lights.
#[derive(Debug, Clone, PartialEq)]
pub struct PalmSample {
    pub person_id: String,
    pub sample_index: usize,
    /// Exactly four images ordered blue, green, red, nir.
    pub spectra: Vec<GrayImage>,
}

/// A validated collection of samples: every person holds the same number
/// of samples and every image shares one size.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<PalmSample>,
    persons: usize,
    samples_per_person: usize,
}

impl Dataset {
    /// Validates and wraps samples. Samples are reordered by person label,
    /// then sample index.
    pub fn new(mut samples: Vec<PalmSample>) -> DataResult<Self> {
        if samples.is_empty() {
            return Err(DataError::InvalidParameter("dataset has no samples".into()));
        }
        samples.sort_by(|a, b| {
            a.person_id
                .cmp(&b.person_id)
                .then(a.sample_index.cmp(&b.sample_index))
        });

        let (fw, fh) = {
            let img = &samples[0].spectra[0];
            (img.width(), img.height())
        };
        let mut per_person: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for sample in &samples {
            if sample.spectra.len() != Spectrum::ALL.len() {
                return Err(DataError::MissingSpectrum {
                    person: sample.person_id.clone(),
                    sample: sample.sample_index,
                    spectrum: Spectrum::ALL[sample.spectra.len().min(3)].name(),
                });
            }
            for img in &sample.spectra {
                if img.width() != fw || img.height() != fh {
                    return Err(DataError::ImageSizeMismatch {
                        first_width: fw,
                        first_height: fh,
                        width: img.width(),
                        height: img.height(),
                    });
                }
            }
            per_person
                .entry(&sample.person_id)
                .or_default()
                .push(sample.sample_index);
        }

        let persons = per_person.len();
        let samples_per_person = per_person.values().next().unwrap().len();
        for (person, indices) in &per_person {
            if indices.len() != samples_per_person {
                return Err(DataError::RaggedDataset {
                    person: person.to_string(),
                    expected: samples_per_person,
                    got: indices.len(),
                });
            }
            let mut sorted = indices.clone();
            sorted.dedup();
            if sorted.len() != indices.len() {
                return Err(DataError::InvalidLayout {
                    path: Path::new(person).to_path_buf(),
                    reason: "duplicate sample index".into(),
                });
            }
        }

        Ok(Self {
            samples,
            persons,
            samples_per_person,
        })
    }

    pub fn samples(&self) -> &[PalmSample] {
        &self.samples
    }

    pub fn persons(&self) -> usize {
        self.persons
    }

    pub fn samples_per_person(&self) -> usize {
        self.samples_per_person
    }

    /// Image size shared by every spectrum of every sample.
    pub fn image_size(&self) -> (usize, usize) {
        let img = &self.samples[0].spectra[0];
        (img.width(), img.height())
    }

    /// Distinct person labels in sorted order.
    pub fn person_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.samples.iter().map(|s| s.person_id.as_str()).collect();
        ids.dedup();
        ids
    }
}

/// Loads a dataset from the directory layout described in the module docs.
pub fn load_dataset(root: &Path) -> DataResult<Dataset> {
    if !root.is_dir() {
        return Err(DataError::FileNotFound(root.to_path_buf()));
    }
    let mut person_dirs: Vec<_> = fs::read_dir(root)
        .map_err(|e| DataError::Io {
            path: root.to_path_buf(),
            source: e,
        })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    person_dirs.sort();
    if person_dirs.is_empty() {
        return Err(DataError::InvalidLayout {
            path: root.to_path_buf(),
            reason: "no person directories".into(),
        });
    }

    let mut samples = Vec::new();
    for dir in &person_dirs {
        let person_id = dir
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| DataError::InvalidLayout {
                path: dir.clone(),
                reason: "person directory name is not valid UTF-8".into(),
            })?
            .to_string();

        // sample_index -> per-spectrum image slots
        let mut pending: BTreeMap<usize, [Option<GrayImage>; 4]> = BTreeMap::new();
        let mut files: Vec<_> = fs::read_dir(dir)
            .map_err(|e| DataError::Io {
                path: dir.clone(),
                source: e,
            })?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        for file in files {
            let stem = match file.file_stem().and_then(|s| s.to_str()) {
                Some(s) => s,
                None => continue,
            };
            if file.extension().and_then(|e| e.to_str()) != Some("pgm") {
                continue;
            }
            let (index_part, spectrum_part) =
                stem.rsplit_once('_').ok_or_else(|| DataError::InvalidLayout {
                    path: file.clone(),
                    reason: "expected <index>_<spectrum>.pgm".into(),
                })?;
            let spectrum =
                Spectrum::from_name(spectrum_part).ok_or_else(|| DataError::InvalidLayout {
                    path: file.clone(),
                    reason: format!("unknown spectrum '{spectrum_part}'"),
                })?;
            let sample_index: usize =
                index_part.parse().map_err(|_| DataError::InvalidLayout {
                    path: file.clone(),
                    reason: format!("sample index '{index_part}' is not an integer"),
                })?;
            let image = read_pgm(&file)?;
            pending.entry(sample_index).or_default()[spectrum.index()] = Some(image);
        }

        for (sample_index, slots) in pending {
            let mut spectra = Vec::with_capacity(4);
            for (slot, spectrum) in slots.into_iter().zip(Spectrum::ALL) {
                spectra.push(slot.ok_or_else(|| DataError::MissingSpectrum {
                    person: person_id.clone(),
                    sample: sample_index,
                    spectrum: spectrum.name(),
                })?);
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

/// Writes a dataset to disk in the canonical layout.
pub fn save_dataset(root: &Path, dataset: &Dataset) -> DataResult<()> {
    let pad = dataset
        .samples()
        .iter()
        .map(|s| s.sample_index)
        .max()
        .unwrap_or(0)
        .to_string()
        .len()
        .max(2);
    for sample in dataset.samples() {
        let dir = root.join(&sample.person_id);
        fs::create_dir_all(&dir).map_err(|e| DataError::Io {
            path: dir.clone(),
            source: e,
        })?;
        for (img, spectrum) in sample.spectra.iter().zip(Spectrum::ALL) {
            let name = format!("{:0pad$}_{}.pgm", sample.sample_index, spectrum.name());
            write_pgm(&dir.join(name), img)?;
        }
    }
    Ok(())
}

/// How training samples are chosen within each person.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitMode {
    /// The lowest `train_count` sample indices enroll.
    FirstN,
    /// A per-person seeded shuffle picks the training samples.
    SeededRandom(u64),
}

/// Per-person train/test partition specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub train_count: usize,
    pub mode: SplitMode,
}

/// Splits every person's samples into `train_count` training samples and
/// the rest. The two sides are disjoint and together cover the dataset.
pub fn split<'d>(
    dataset: &'d Dataset,
    spec: &SplitSpec,
) -> DataResult<(Vec<&'d PalmSample>, Vec<&'d PalmSample>)> {
    if spec.train_count == 0 || spec.train_count >= dataset.samples_per_person() {
        return Err(DataError::InvalidSplit(format!(
            "train_count {} must be in 1..{}",
            spec.train_count,
            dataset.samples_per_person()
        )));
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (ordinal, person) in dataset.person_ids().iter().enumerate() {
        let mut samples: Vec<&PalmSample> = dataset
            .samples()
            .iter()
            .filter(|s| s.person_id == *person)
            .collect();
        // Dataset order is already (person, index)-sorted.
        match spec.mode {
            SplitMode::FirstN => {}
            SplitMode::SeededRandom(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(ordinal as u64);
                samples.shuffle(&mut rng);
            }
        }
        train.extend(&samples[..spec.train_count]);
        test.extend(&samples[spec.train_count..]);
    }
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_image(level: f64) -> GrayImage {
        GrayImage::from_fn(16, 16, |_, _| level).unwrap()
    }

    fn sample(person: &str, index: usize) -> PalmSample {
        PalmSample {
            person_id: person.into(),
            sample_index: index,
            spectra: (0..4).map(|s| flat_image((index * 4 + s) as f64)).collect(),
        }
    }

    fn toy_dataset(persons: usize, samples_per: usize) -> Dataset {
        let mut samples = Vec::new();
        for p in 0..persons {
            for i in 0..samples_per {
                samples.push(sample(&format!("person{p:02}"), i));
            }
        }
        Dataset::new(samples).unwrap()
    }

    #[test]
    fn counts_and_ordering() {
        let ds = toy_dataset(2, 3);
        assert_eq!(ds.persons(), 2);
        assert_eq!(ds.samples_per_person(), 3);
        assert_eq!(ds.samples().len(), 6);
        assert_eq!(ds.person_ids(), vec!["person00", "person01"]);
    }

    #[test]
    fn rejects_missing_spectrum_and_ragged_persons() {
        let mut bad = sample("p", 0);
        bad.spectra.pop();
        let err = Dataset::new(vec![bad]).unwrap_err();
        assert!(matches!(err, DataError::MissingSpectrum { .. }));

        let samples = vec![sample("a", 0), sample("a", 1), sample("a", 2), sample("b", 0), sample("b", 1)];
        assert!(matches!(
            Dataset::new(samples),
            Err(DataError::RaggedDataset { .. })
        ));
    }

    #[test]
    fn reference_scale_split_arithmetic() {
        // 500 persons x 12 samples at 4/12: 2000 training, 4000 test.
        let ds = toy_dataset(500, 12);
        let (train, test) = split(
            &ds,
            &SplitSpec {
                train_count: 4,
                mode: SplitMode::FirstN,
            },
        )
        .unwrap();
        assert_eq!(train.len(), 2000);
        assert_eq!(test.len(), 4000);
    }

    #[test]
    fn first_n_split_arithmetic() {
        let ds = toy_dataset(5, 4);
        let (train, test) = split(
            &ds,
            &SplitSpec {
                train_count: 1,
                mode: SplitMode::FirstN,
            },
        )
        .unwrap();
        assert_eq!(train.len(), 5);
        assert_eq!(test.len(), 15);
        assert!(train.iter().all(|s| s.sample_index == 0));
    }

    #[test]
    fn split_rejects_degenerate_counts() {
        let ds = toy_dataset(2, 3);
        for bad in [0, 3, 4] {
            assert!(matches!(
                split(
                    &ds,
                    &SplitSpec {
                        train_count: bad,
                        mode: SplitMode::FirstN
                    }
                ),
                Err(DataError::InvalidSplit(_))
            ));
        }
    }

    #[test]
    fn seeded_split_is_deterministic_and_partitions() {
        let ds = toy_dataset(4, 5);
        let spec = SplitSpec {
            train_count: 2,
            mode: SplitMode::SeededRandom(99),
        };
        let (train_a, test_a) = split(&ds, &spec).unwrap();
        let (train_b, test_b) = split(&ds, &spec).unwrap();
        assert_eq!(train_a, train_b);
        assert_eq!(test_a, test_b);

        // Partition: identity over (person, index), no overlap, full cover.
        let key = |s: &PalmSample| (s.person_id.clone(), s.sample_index);
        let mut seen: Vec<_> = train_a.iter().chain(test_a.iter()).map(|s| key(s)).collect();
        seen.sort();
        let mut all: Vec<_> = ds.samples().iter().map(key).collect();
        all.sort();
        assert_eq!(seen, all);

        // A different seed should (with overwhelming probability) differ.
        let (train_c, _) = split(
            &ds,
            &SplitSpec {
                train_count: 2,
                mode: SplitMode::SeededRandom(100),
            },
        )
        .unwrap();
        assert_ne!(train_a, train_c);
    }

    #[test]
    fn disk_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let ds = toy_dataset(2, 3);
        save_dataset(dir.path(), &ds).unwrap();
        let loaded = load_dataset(dir.path()).unwrap();
        assert_eq!(loaded, ds);
    }

    #[test]
    fn loading_reports_missing_spectrum_file() {
        let dir = tempfile::tempdir().unwrap();
        let ds = toy_dataset(2, 2);
        save_dataset(dir.path(), &ds).unwrap();
        std::fs::remove_file(dir.path().join("person01").join("01_nir.pgm")).unwrap();
        let err = load_dataset(dir.path()).unwrap_err();
        assert!(matches!(
            err,
            DataError::MissingSpectrum {
                sample: 1,
                spectrum: "nir",
                ..
            }
        ));
    }

    #[test]
    fn loading_rejects_ragged_layout() {
        let dir = tempfile::tempdir().unwrap();
        let ds = toy_dataset(2, 3);
        save_dataset(dir.path(), &ds).unwrap();
        for spectrum in Spectrum::ALL {
            std::fs::remove_file(
                dir.path()
                    .join("person01")
                    .join(format!("02_{}.pgm", spectrum.name())),
            )
            .unwrap();
        }
        assert!(matches!(
            load_dataset(dir.path()),
            Err(DataError::RaggedDataset { .. })
        ));
    }
}
