//! Detection and analysis of coordinated propaganda accounts ("seminar
//! users") in archived tweet streams.
//!
//! The pipeline runs in stages, each usable on its own:
//!
//! 1. [`corpus`] — ingest line-delimited tweet records, normalize Arabic
//!    text, drop auto-generated religious content, and aggregate per-user
//!    tallies.
//! 2. [`features`] — turn a per-user aggregate into a 20-dimensional
//!    behavioral feature vector (interaction, diversity, style).
//! 3. [`svm`] — from-scratch RBF-kernel soft-margin SVM trained with SMO,
//!    with leave-one-out cross-validation and P/R/F1 reporting.
//! 4. [`stance`] — semi-supervised pro/anti labeling by retweet-consistency
//!    propagation from a small seed set.
//! 5. [`campaigns`] — burst scoring of hashtag campaigns and
//!    mainstream-penetration statistics.
//! 6. [`network`] — cosine-similarity user graphs over hashtag profiles,
//!    with force-directed layout and DOT/GraphML export.
//! 7. [`synth`] — deterministic synthetic corpora with planted ground truth
//!    for end-to-end verification.
//!
//! All randomized steps take explicit seeds and every stage is deterministic
//! for a fixed input, independent of thread count.

pub mod campaigns;
pub mod corpus;
pub mod error;
pub mod features;
pub mod network;
mod par;
pub mod stance;
pub mod svm;
pub mod synth;

pub use error::{Error, Result};
