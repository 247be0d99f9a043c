//! Evaluation toolkit for subjective pairwise story similarity.
//!
//! The crate covers the full loop around a similarity estimator: ingesting
//! story pairs, human annotations, model predictions and story embeddings;
//! correlation and classification metrics; inter-annotator agreement;
//! a contrastive loss family with analytic gradients; a deterministic linear
//! projection-head trainer; and error diagnostics that show where an
//! estimator collapses to the label prior.

pub mod agreement;
pub mod cli;
pub mod data;
pub mod diagnostics;
pub mod error;
pub mod losses;
pub mod report;
pub mod scoring;
pub mod stats;
pub mod trainer;

pub use error::{Error, Result};

/// Runs every code block in the guide as a doctest, so the book can never
/// drift from the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/data-model.md")]
    mod data_model {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/agreement.md")]
    mod agreement {}
    #[doc = include_str!("../../../book/src/losses.md")]
    mod losses {}
    #[doc = include_str!("../../../book/src/training.md")]
    mod training {}
    #[doc = include_str!("../../../book/src/scoring-diagnostics.md")]
    mod scoring_diagnostics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
