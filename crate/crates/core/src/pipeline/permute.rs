use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use crate::data::{open_libsvm, write_libsvm_line, Dataset};
use crate::error::{Error, Result};
use crate::sparse::SparseExample;

/// Training sets estimated above this many bytes are shuffled on disk.
pub const DEFAULT_MEMORY_BUDGET: usize = 1 << 30;

const MAX_BUCKETS: usize = 256;

/// A permuted view of a training set. Holds the temporary directory of an
/// on-disk shuffle, if one was needed.
#[derive(Debug)]
pub struct PermutedData {
    pub dataset: Dataset,
    _scratch: Option<TempDir>,
}

/// Rough in-memory footprint of a dataset.
fn estimated_bytes(data: &Dataset) -> Result<usize> {
    const PER_NONZERO: usize = 12;
    const PER_EXAMPLE: usize = 64;
    Ok(match data {
        Dataset::Memory(_) | Dataset::Permuted { .. } => 0,
        Dataset::Synthetic { data, .. } => {
            let s = data.spec();
            s.n_train * ((s.idim + s.ndim) * PER_NONZERO + PER_EXAMPLE)
        }
        Dataset::Libsvm(path) => {
            let len = fs::metadata(path).map_err(|e| Error::file(path, e))?.len() as usize;
            let gz = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("gz"));
            if gz {
                len.saturating_mul(8)
            } else {
                len.saturating_mul(2)
            }
        }
    })
}

/// Returns `data` in a uniformly random order determined by `seed`.
///
/// Sets whose estimated footprint fits `memory_budget` are loaded once and
/// visited through an index permutation; larger ones are shuffled into a
/// temporary libsvm file.
pub fn permute(data: &Dataset, seed: u64, memory_budget: usize) -> Result<PermutedData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if estimated_bytes(data)? <= memory_budget {
        let base = match data {
            Dataset::Memory(base) | Dataset::Permuted { base, .. } => Arc::clone(base),
            other => Arc::new(other.materialize()?),
        };
        let mut order: Vec<u32> = match data {
            Dataset::Permuted { order, .. } => order.as_ref().clone(),
            _ => (0..base.len() as u32).collect(),
        };
        order.shuffle(&mut rng);
        return Ok(PermutedData {
            dataset: Dataset::Permuted {
                base,
                order: Arc::new(order),
            },
            _scratch: None,
        });
    }

    let scratch = tempfile::tempdir()?;
    let path = shuffle_to_disk(data, seed, memory_budget, scratch.path())?;
    Ok(PermutedData {
        dataset: Dataset::Libsvm(path),
        _scratch: Some(scratch),
    })
}

/// Shuffles `data` into `dir/shuffled.svm` without holding it in memory:
/// every example goes to a random bucket file, then each bucket is loaded,
/// shuffled and appended.
pub fn shuffle_to_disk(data: &Dataset, seed: u64, memory_budget: usize, dir: &Path) -> Result<PathBuf> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let estimate = estimated_bytes(data)?;
    let buckets = (2 * estimate / memory_budget.max(1) + 1).clamp(2, MAX_BUCKETS);

    let bucket_paths: Vec<PathBuf> = (0..buckets)
        .map(|b| dir.join(format!("bucket-{b}.svm")))
        .collect();
    {
        let mut writers = bucket_paths
            .iter()
            .map(|p| File::create(p).map(BufWriter::new).map_err(|e| Error::file(p, e)))
            .collect::<Result<Vec<_>>>()?;
        for ex in data.open()? {
            let ex = ex?;
            let b = rng.random_range(0..buckets);
            write_libsvm_line(&mut writers[b], &ex)?;
        }
        for w in &mut writers {
            w.flush()?;
        }
    }

    let out_path = dir.join("shuffled.svm");
    let mut out = BufWriter::new(File::create(&out_path).map_err(|e| Error::file(&out_path, e))?);
    for path in &bucket_paths {
        let mut bucket: Vec<SparseExample> = open_libsvm(path)?.collect::<Result<_>>()?;
        bucket.shuffle(&mut rng);
        for ex in &bucket {
            write_libsvm_line(&mut out, ex)?;
        }
        fs::remove_file(path).map_err(|e| Error::file(path, e))?;
    }
    out.flush()?;
    Ok(out_path)
}
