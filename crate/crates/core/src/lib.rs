//! edumine: an educational data-mining toolkit built from scratch.
//!
//! The library covers the full pipeline for analyzing student cohorts:
//!
//! - [`synth`] generates a deterministic synthetic cohort with exact
//!   record-count and missing-cell marginals.
//! - [`dataset`] parses CSV, runs two-stage missing-value cleaning,
//!   discretizes numeric features into bands, and splits data.
//! - [`kmeans`] partitions students into homogeneous clusters with seeded
//!   multi-restart Lloyd iterations.
//! - [`nbayes`] fits a hybrid naive Bayes classifier (smoothed categorical
//!   tables plus Gaussian densities) to predict cluster membership.
//! - [`eval`] builds confusion matrices and the column-normalized
//!   percentage view, with aligned-text and CSV rendering.
//! - [`hierarchy`] combines knowledge, punctuality, and coaching signals
//!   into an overall per-student ranking and per-year cohort reports.
//! - [`pipeline`] wires the steps into the CLI commands and writes run
//!   manifests next to every artifact.
//!
//! Each capability has a runnable demo under `examples/`:
//!
//! ```bash
//! cargo run --example synthesize_cohort
//! cargo run --example clean_and_discretize
//! cargo run --example cluster_students
//! cargo run --example train_and_predict
//! cargo run --example evaluate_predictions
//! cargo run --example rank_students
//! cargo run --example full_pipeline
//! ```
//!
//! The `edumine` binary exposes the same steps as batch subcommands; see the
//! README for flags and file formats.

pub mod config;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod hierarchy;
pub mod kmeans;
pub mod nbayes;
pub mod pipeline;
pub mod synth;

pub use config::{load_config, ToolkitConfig};
pub use dataset::{
    clean, default_bands, discretize, parse_csv, parse_csv_str, split, Band, BandSpec,
    CleaningReport, Dataset, Feature, FeatureKind, FeatureSchema, RawRecord, Row, StudentRecord,
    Value,
};
pub use error::{Error, Result};
pub use eval::{
    accuracy, column_percentages, confusion, materialize, ConfusionMatrix, PercentageTable,
};
pub use hierarchy::{
    cohort_report, evaluate_record, overall_ranking, score_knowledge, score_performance,
    score_punctuality, HierarchyConfig, Level, RankingResult,
};
pub use kmeans::{KMeansParams, KMeansResult, PointMatrix, Standardizer};
pub use nbayes::{NaiveBayesModel, NaiveBayesParams};
pub use synth::{generate, SynthConfig};
