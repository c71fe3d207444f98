//! Multispectral palmprint identification pipeline: dataset tooling, PGM
//! IO, feature/model serialization, and the evaluation harness behind the
//! `palmid` command-line tool. The numerical core lives in `palmid-core`.

pub mod dataset;
pub mod error;
pub mod harness;
pub mod model_io;
pub mod pgm;
pub mod pipeline;
pub mod report;
pub mod synth;

pub use error::{DataError, Error, Result};
