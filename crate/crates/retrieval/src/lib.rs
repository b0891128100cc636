//! Retrieval benchmarks for the group-of-segments matcher: labelled datasets,
//! pairwise distance matrices, bullseye and top-k scores, and the occlusion
//! and merging perturbations.

pub mod bench;
pub mod cache;
pub mod dataset;
pub mod engine;
pub mod error;
pub mod matrix;
pub mod perturb;
pub mod score;
pub mod synth;

pub use error::{Error, Result};
