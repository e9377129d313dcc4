//! Gap characterization and gap-filling benchmarks for composite well logs.
//!
//! The crate is organized the way a study runs:
//!
//! 1. [`ingest`] reads composite logs (canonical CSV or LAS 2.0) into a
//!    [`Dataset`](ingest::Dataset) and fits dataset-wide min/max scaling.
//! 2. [`gaps`] finds depth discontinuities in each well and summarizes them.
//! 3. [`synth`] picks a complete well and plants seeded synthetic gaps in its
//!    target curve.
//! 4. [`regress`] provides five regressors behind one fit/predict contract.
//! 5. [`eval`] runs the model × gap-size × trial matrix and reports mean
//!    absolute error distributions.
//!
//! [`commands`] binds these into the `ingest`, `gaps`, `bench` and `fill`
//! batch commands used by the `wellgap` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod eval;
pub mod gaps;
pub mod ingest;
pub mod regress;
pub mod seed;
pub mod stats;
pub mod synth;
pub mod synthetic;

pub use error::{Error, Result};
