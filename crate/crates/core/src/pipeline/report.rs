use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::learners::Algorithm;

pub const CSV_HEADER: &str = "algo,B,seed,accuracy,mistakes,sparsity_pct,train_s,total_s";

/// Metrics of one train/evaluate run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub algo: Algorithm,
    /// Feature budget; the full dimensionality for non-selecting learners.
    pub budget: usize,
    pub seed: u64,
    /// Test accuracy in `[0, 1]`.
    pub accuracy: f64,
    /// Online mistakes during training.
    pub mistakes: u64,
    /// Percentage of the `dim` weights that are zero.
    pub sparsity_pct: f64,
    pub train_seconds: f64,
    pub total_seconds: f64,
    pub dim: usize,
    /// Indices of nonzero weights, ascending.
    pub selected: Vec<usize>,
}

impl RunReport {
    /// The report with both timing fields zeroed, for determinism checks.
    pub fn without_timing(&self) -> RunReport {
        RunReport {
            train_seconds: 0.0,
            total_seconds: 0.0,
            ..self.clone()
        }
    }

    /// `|selected ∩ truth| / |truth|`.
    pub fn recovery(&self, truth: &[usize]) -> f64 {
        recovery(&self.selected, truth)
    }
}

pub(crate) fn recovery(selected: &[usize], truth: &[usize]) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    let hits = truth.iter().filter(|t| selected.binary_search(t).is_ok()).count();
    hits as f64 / truth.len() as f64
}

/// Percentage of zero weights among `dim` coordinates.
pub fn sparsity_pct(nnz: usize, dim: usize) -> f64 {
    if dim == 0 {
        return 100.0;
    }
    let zeros = dim.saturating_sub(nnz);
    100.0 * zeros as f64 / dim as f64
}

#[derive(Serialize)]
struct CsvRow<'a> {
    algo: &'a str,
    #[serde(rename = "B")]
    budget: usize,
    seed: u64,
    accuracy: f64,
    mistakes: u64,
    sparsity_pct: f64,
    train_s: f64,
    total_s: f64,
}

/// Writes reports as CSV with the [`CSV_HEADER`] columns.
pub fn write_csv<W: Write>(out: W, reports: &[RunReport]) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(CSV_HEADER.split(','))?;
    for r in reports {
        writer.serialize(CsvRow {
            algo: r.algo.name(),
            budget: r.budget,
            seed: r.seed,
            accuracy: r.accuracy,
            mistakes: r.mistakes,
            sparsity_pct: r.sparsity_pct,
            train_s: r.train_seconds,
            total_s: r.total_seconds,
        })?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes a fixed-width table for terminals.
pub fn write_table<W: Write>(mut out: W, reports: &[RunReport]) -> Result<()> {
    writeln!(
        out,
        "{:<6} {:>9} {:>6} {:>9} {:>9} {:>10} {:>9} {:>9}",
        "algo", "B", "seed", "accuracy", "mistakes", "sparsity%", "train_s", "total_s"
    )?;
    for r in reports {
        writeln!(
            out,
            "{:<6} {:>9} {:>6} {:>9.4} {:>9} {:>10.3} {:>9.3} {:>9.3}",
            r.algo.name(),
            r.budget,
            r.seed,
            r.accuracy,
            r.mistakes,
            r.sparsity_pct,
            r.train_seconds,
            r.total_seconds
        )?;
    }
    Ok(())
}
