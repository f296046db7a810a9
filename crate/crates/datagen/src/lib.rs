//! Labeled graph dataset generation and bit-exact serialization.
//!
//! Two families: `random` (independent random negatives filtered by the
//! evaluator) and `perturb` (each positive paired with a 1-2 bit flip that
//! verifiably violates the property). Datasets are written as text records
//! with adjacent manifests carrying generation provenance and a SHA-256
//! content checksum; split manifests carve the eleven sizes into the
//! train/test categories.

pub mod dataset;
pub mod generator;
pub mod seeds;
pub mod splits;

pub use dataset::{data_path, read_dataset, write_dataset, DatasetManifest, IoError};
pub use generator::{
    gen_graphperturb, gen_graphrandom, verify_dataset, Family, GenError, GenJob, GenLimits,
    GeneratedDataset, LabeledSet, Provenance, VerifyReport, Violation,
};
pub use splits::{make_splits, SplitCategory, SplitError, SplitSpec};
