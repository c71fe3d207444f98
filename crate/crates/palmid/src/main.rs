//! Command-line front end for the palmprint identification pipeline.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use palmid::dataset::{save_dataset, SplitMode};
use palmid::harness::{run_pca_curve, run_table1, DataSource, Fraction, RunConfig};
use palmid::pipeline::{extract_features, features_to_csv, write_features_csv};
use palmid::synth::{generate_synthetic, SyntheticSpec};
use palmid::{DataError, Error};
use palmid_core::FeatureExtractor;

#[derive(Parser)]
#[command(
    name = "palmid",
    version,
    about = "Multispectral palmprint identification: block DCT + wavelet features, \
             PCA, and majority voting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset on disk in the standard layout
    Synth(SynthArgs),
    /// Extract per-image features from a dataset into a CSV table
    Extract(ExtractArgs),
    /// Majority-voting identification accuracy across training fractions
    Table1(Table1Args),
    /// Minimum-distance accuracy across PCA component counts
    PcaCurve(PcaCurveArgs),
}

/// Synthetic dataset knobs, shared by every subcommand that can source
/// its data from the generator.
#[derive(Args, Clone)]
struct SyntheticArgs {
    /// Number of persons (classes)
    #[arg(long, default_value_t = 50)]
    persons: usize,
    /// Samples per person
    #[arg(long, default_value_t = 12)]
    samples: usize,
    /// Image size as WxH, multiples of 16
    #[arg(long, default_value = "128x128")]
    size: String,
    /// Per-pixel Gaussian noise standard deviation
    #[arg(long, default_value_t = 8.0)]
    sigma: f64,
    /// RNG seed (also seeds random splits)
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl SyntheticArgs {
    fn spec(&self) -> Result<SyntheticSpec, Error> {
        let (w, h) = self
            .size
            .split_once('x')
            .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
            .ok_or_else(|| Error::Usage(format!("--size '{}' is not WxH", self.size)))?;
        Ok(SyntheticSpec {
            persons: self.persons,
            samples_per_person: self.samples,
            width: w,
            height: h,
            noise_sigma: self.sigma,
            seed: self.seed,
        })
    }
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// Dataset directory: <root>/<person>/<index>_<spectrum>.pgm
    #[arg(long, value_name = "DIR", conflicts_with = "synthetic")]
    data: Option<PathBuf>,
    /// Use the seeded synthetic generator instead of a directory
    #[arg(long)]
    synthetic: bool,
    #[command(flatten)]
    synth: SyntheticArgs,
}

impl SourceArgs {
    fn source(&self) -> Result<DataSource, Error> {
        match (&self.data, self.synthetic) {
            (Some(dir), false) => Ok(DataSource::Directory(dir.clone())),
            (None, true) => Ok(DataSource::Synthetic(self.synth.spec()?)),
            (None, false) => Err(Error::Usage(
                "one of --data <dir> or --synthetic is required".into(),
            )),
            (Some(_), true) => unreachable!("clap conflicts_with"),
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    synth: SyntheticArgs,
    /// Directory to write the dataset into
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Zig-zag DCT coefficients kept per block
    #[arg(long, default_value_t = 9)]
    dct_count: usize,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Table1Args {
    #[command(flatten)]
    source: SourceArgs,
    /// Training fractions, comma separated (e.g. 4/12,5/12,6/12)
    #[arg(long, value_delimiter = ',', default_values_t = default_fractions())]
    split: Vec<Fraction>,
    /// Shuffle each person's samples with the seed before splitting
    /// instead of enrolling the first n
    #[arg(long)]
    random_split: bool,
    #[arg(long, default_value_t = 9)]
    dct_count: usize,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PcaCurveArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Training fraction (e.g. 4/12)
    #[arg(long, default_value = "4/12")]
    split: Fraction,
    /// PCA component counts to sweep, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    #[arg(long)]
    random_split: bool,
    #[arg(long, default_value_t = 9)]
    dct_count: usize,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn default_fractions() -> Vec<Fraction> {
    vec![
        Fraction { train: 4, of: 12 },
        Fraction { train: 5, of: 12 },
        Fraction { train: 6, of: 12 },
    ]
}

fn split_mode(random: bool, seed: u64) -> SplitMode {
    if random {
        SplitMode::SeededRandom(seed)
    } else {
        SplitMode::FirstN
    }
}

fn emit(out: &Option<PathBuf>, contents: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, contents).map_err(|e| {
            Error::Data(DataError::Io {
                path: path.clone(),
                source: e,
            })
        }),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Synth(args) => {
            let dataset = generate_synthetic(&args.synth.spec()?)?;
            save_dataset(&args.out, &dataset)?;
            eprintln!(
                "wrote {} samples ({} persons x {}) to {}",
                dataset.samples().len(),
                dataset.persons(),
                dataset.samples_per_person(),
                args.out.display()
            );
            Ok(())
        }
        Command::Extract(args) => {
            let dataset = palmid::harness::load_source(&args.source.source()?)?;
            let extractor = FeatureExtractor::with_dct_count(args.dct_count)
                .map_err(|e| Error::Usage(format!("invalid --dct-count: {e}")))?;
            let features = extract_features(&dataset, &extractor);
            match &args.out {
                Some(path) => write_features_csv(path, &features)?,
                None => print!("{}", features_to_csv(&features)),
            }
            Ok(())
        }
        Command::Table1(args) => {
            let config = RunConfig {
                source: args.source.source()?,
                splits: args.split.clone(),
                split_mode: split_mode(args.random_split, args.source.synth.seed),
                ks: vec![],
                dct_count: args.dct_count,
                out: args.out.clone(),
            };
            let report = run_table1(&config)?;
            emit(&config.out, &report.to_csv())
        }
        Command::PcaCurve(args) => {
            let config = RunConfig {
                source: args.source.source()?,
                splits: vec![args.split],
                split_mode: split_mode(args.random_split, args.source.synth.seed),
                ks: args.k.clone(),
                dct_count: args.dct_count,
                out: args.out.clone(),
            };
            let report = run_pca_curve(&config)?;
            emit(&config.out, &report.to_csv())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // Help and version go to stdout, diagnostics to stderr.
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
