//! Dataset ingestion, synthetic data, 1-NN evaluation and end-to-end runs.

mod dataset;
mod eval;
mod run;
mod synth;

pub use dataset::{load_dataset, parse_labels, read_labels, write_labels, Dataset, Orientation};
pub use eval::{evaluate_1nn, split_indices};
pub use run::{append_metrics_line, run, Metrics, Residuals, RunConfig, RunReport};
pub use synth::synth_gaussian_classes;
