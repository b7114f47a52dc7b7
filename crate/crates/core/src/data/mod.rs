//! Example sources: libsvm files, in-memory buffers and the synthetic
//! generator.

pub mod libsvm;
pub mod synthetic;

use std::path::PathBuf;
use std::sync::Arc;

use crate::error::Result;
use crate::sparse::SparseExample;

pub use libsvm::{open_libsvm, parse_libsvm_line, write_libsvm, write_libsvm_line, LibsvmReader};
pub use synthetic::{generate_synthetic, Split, Synthetic, SyntheticData, SyntheticSpec, SyntheticStream};

/// A boxed stream of examples that can be handed to a loader thread.
pub type ExampleIter = Box<dyn Iterator<Item = Result<SparseExample>> + Send>;

/// A re-openable, deterministic source of examples.
#[derive(Debug, Clone)]
pub enum Dataset {
    Libsvm(PathBuf),
    Synthetic {
        data: Arc<SyntheticData>,
        split: Split,
    },
    Memory(Arc<Vec<SparseExample>>),
    /// `base` visited in the order given by `order`.
    Permuted {
        base: Arc<Vec<SparseExample>>,
        order: Arc<Vec<u32>>,
    },
}

impl Dataset {
    pub fn libsvm(path: impl Into<PathBuf>) -> Self {
        Dataset::Libsvm(path.into())
    }

    pub fn memory(examples: Vec<SparseExample>) -> Self {
        Dataset::Memory(Arc::new(examples))
    }

    /// Starts a fresh pass over the source.
    pub fn open(&self) -> Result<ExampleIter> {
        Ok(match self {
            Dataset::Libsvm(path) => Box::new(open_libsvm(path)?),
            Dataset::Synthetic { data, split } => Box::new(data.stream(*split).map(Ok)),
            Dataset::Memory(examples) => {
                let examples = Arc::clone(examples);
                Box::new((0..examples.len()).map(move |i| Ok(examples[i].clone())))
            }
            Dataset::Permuted { base, order } => {
                let (base, order) = (Arc::clone(base), Arc::clone(order));
                Box::new((0..order.len()).map(move |k| Ok(base[order[k] as usize].clone())))
            }
        })
    }

    /// Declared dimensionality, when known without a scan.
    pub fn dim_hint(&self) -> Option<usize> {
        match self {
            Dataset::Libsvm(_) => None,
            Dataset::Synthetic { data, .. } => Some(data.spec().dim),
            Dataset::Memory(examples) | Dataset::Permuted { base: examples, .. } => {
                Some(examples.iter().map(SparseExample::dim).max().unwrap_or(0))
            }
        }
    }

    /// Reads the whole source into memory.
    pub fn materialize(&self) -> Result<Vec<SparseExample>> {
        match self {
            Dataset::Memory(examples) => Ok(examples.as_ref().clone()),
            _ => self.open()?.collect(),
        }
    }
}
