//! Bengali-specific subword tokenization toolkit.
//!
//! The pipeline runs raw text through Unicode normalization and Bengali-only
//! filtering ([`normalizer`]), segments it into orthographic grapheme clusters
//! ([`grapheme`]), trains a BPE merge table whose merges respect word
//! boundaries and a configurable suffix lexicon ([`bpe`]), and persists the
//! result as a diff-able text model file ([`model_io`]).
//!
//! A benchmark harness ([`corpus`], [`eval`], [`bench`]) measures segmentation
//! granularity, encoding throughput, and downstream TF-IDF + logistic
//! regression classification quality, so constrained and unconstrained merge
//! profiles can be compared side by side on labeled corpora.

pub mod baselines;
pub mod bench;
pub mod bpe;
pub mod corpus;
pub mod eval;
pub mod grapheme;
pub mod model_io;
pub mod normalizer;
pub mod synth;

/// Scalar type used by the feature/classifier layer unless a caller opts
/// into a different `num_traits::Float` instantiation.
pub type Real = f64;

/// Toolkit version recorded in run manifests and model fingerprints.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
