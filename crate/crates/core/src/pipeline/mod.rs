//! Single-pass training, evaluation, cross-validation and budget sweeps.

mod cv;
mod loader;
mod permute;
mod report;
mod sweep;
mod train;

pub use cv::{cross_validate, CvGrid, CvOutcome};
pub use loader::{with_loaded, LoaderMode, DEFAULT_CHANNEL_CAPACITY, THREADS_ENV};
pub use permute::{permute, shuffle_to_disk, PermutedData, DEFAULT_MEMORY_BUDGET};
pub use report::{sparsity_pct, write_csv, write_table, RunReport, CSV_HEADER};
pub use sweep::{benchmark_sweep, run_once, SweepConfig};
pub use train::{evaluate, predictions, train_dataset, train_stream, TrainOutcome};
