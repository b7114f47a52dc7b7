//! Synthetic sparse binary classification data with a known set of
//! informative features.
//!
//! A fixed set `S` of `idim` informative coordinates and ground-truth weights
//! `w* ~ U(0,1)` on `S` are drawn once per dataset. Each example carries a
//! `N(0,1)` value on every coordinate of `S`, plus `ndim` noise coordinates
//! drawn uniformly without replacement from outside `S` (fresh per example)
//! with `N(0,1)` values. The label is `sign(w* · x_S)`, computed before the
//! noise is added.
//!
//! Randomness comes from ChaCha8 seeded with `seed`: word stream 0 draws `S`
//! and `w*`, stream 1 the training split and stream 2 the test split.

use std::sync::Arc;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::sparse::{Label, SparseExample};

use super::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub n_train: usize,
    pub n_test: usize,
    pub dim: usize,
    /// Informative coordinates, shared by every example.
    pub idim: usize,
    /// Noise coordinates per example.
    pub ndim: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_train == 0 || self.n_test == 0 {
            return Err(Error::config("train and test sizes must be positive"));
        }
        if self.dim == 0 || self.dim > u32::MAX as usize + 1 {
            return Err(Error::config(format!("dimension {} out of range", self.dim)));
        }
        if self.idim == 0 {
            return Err(Error::config("need at least one informative dimension"));
        }
        if self.idim + self.ndim > self.dim {
            return Err(Error::config(format!(
                "idim + ndim = {} exceeds dim = {}",
                self.idim + self.ndim,
                self.dim
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Test,
}

impl Split {
    fn stream_id(self) -> u64 {
        match self {
            Split::Train => 1,
            Split::Test => 2,
        }
    }
}

/// The fixed part of a synthetic dataset: its informative set and weights.
#[derive(Debug, Clone)]
pub struct SyntheticData {
    spec: SyntheticSpec,
    informative: Vec<u32>,
    truth: Vec<f64>,
}

fn nonzero_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let v: f64 = StandardNormal.sample(rng);
        if v != 0.0 {
            return v;
        }
    }
}

impl SyntheticData {
    pub fn new(spec: SyntheticSpec) -> Result<Self> {
        spec.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut informative: Vec<u32> = index::sample(&mut rng, spec.dim, spec.idim)
            .into_iter()
            .map(|i| i as u32)
            .collect();
        informative.sort_unstable();
        let truth = (0..spec.idim).map(|_| rng.random::<f64>()).collect();
        Ok(SyntheticData {
            spec,
            informative,
            truth,
        })
    }

    pub fn spec(&self) -> &SyntheticSpec {
        &self.spec
    }

    /// Informative coordinates, ascending.
    pub fn informative(&self) -> &[u32] {
        &self.informative
    }

    /// Ground-truth weights, aligned with [`informative`](Self::informative).
    pub fn truth_weights(&self) -> &[f64] {
        &self.truth
    }

    /// Same informative set with negated ground truth; every label flips.
    pub fn negated(&self) -> SyntheticData {
        SyntheticData {
            truth: self.truth.iter().map(|w| -w).collect(),
            ..self.clone()
        }
    }

    pub fn stream(self: &Arc<Self>, split: Split) -> SyntheticStream {
        let mut rng = ChaCha8Rng::seed_from_u64(self.spec.seed);
        rng.set_stream(split.stream_id());
        let total = match split {
            Split::Train => self.spec.n_train,
            Split::Test => self.spec.n_test,
        };
        SyntheticStream {
            data: Arc::clone(self),
            rng,
            remaining: total,
            noise: Vec::with_capacity(self.spec.ndim),
        }
    }

    /// Maps a rank among the non-informative coordinates to the coordinate.
    /// `informative[i] - i` counts the free coordinates below
    /// `informative[i]` and is non-decreasing, so a binary search over it
    /// finds how many informative coordinates precede the answer.
    fn complement(&self, rank: usize) -> u32 {
        let s = &self.informative;
        let (mut lo, mut hi) = (0, s.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if s[mid] as usize - mid <= rank {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        (rank + lo) as u32
    }
}

pub struct SyntheticStream {
    data: Arc<SyntheticData>,
    rng: ChaCha8Rng,
    remaining: usize,
    noise: Vec<u32>,
}

impl SyntheticStream {
    fn generate(&mut self) -> SparseExample {
        let data = &*self.data;
        let spec = &data.spec;

        let informative: Vec<f64> = (0..spec.idim).map(|_| nonzero_normal(&mut self.rng)).collect();
        let score: f64 = informative.iter().zip(&data.truth).map(|(x, w)| x * w).sum();
        let label = Label::from_score(score);

        self.noise.clear();
        let free = spec.dim - spec.idim;
        self.noise.extend(
            index::sample(&mut self.rng, free, spec.ndim)
                .into_iter()
                .map(|r| data.complement(r)),
        );
        self.noise.sort_unstable();
        let noise_values: Vec<f64> = (0..spec.ndim).map(|_| nonzero_normal(&mut self.rng)).collect();

        let n = spec.idim + spec.ndim;
        let mut indices = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        let (mut a, mut b) = (0, 0);
        while a < spec.idim || b < spec.ndim {
            let take_informative = b == spec.ndim || (a < spec.idim && data.informative[a] < self.noise[b]);
            if take_informative {
                indices.push(data.informative[a]);
                values.push(informative[a]);
                a += 1;
            } else {
                indices.push(self.noise[b]);
                values.push(noise_values[b]);
                b += 1;
            }
        }
        SparseExample::from_parts_unchecked(label, indices, values)
    }
}

impl Iterator for SyntheticStream {
    type Item = SparseExample;

    fn next(&mut self) -> Option<SparseExample> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(self.generate())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for SyntheticStream {}

/// A generated dataset: train and test sources plus the informative indices.
#[derive(Debug, Clone)]
pub struct Synthetic {
    pub train: Dataset,
    pub test: Dataset,
    pub ground_truth: Vec<usize>,
    pub data: Arc<SyntheticData>,
}

pub fn generate_synthetic(spec: SyntheticSpec) -> Result<Synthetic> {
    let data = Arc::new(SyntheticData::new(spec)?);
    Ok(Synthetic {
        train: Dataset::Synthetic {
            data: Arc::clone(&data),
            split: Split::Train,
        },
        test: Dataset::Synthetic {
            data: Arc::clone(&data),
            split: Split::Test,
        },
        ground_truth: data.informative.iter().map(|&i| i as usize).collect(),
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(dim: usize, idim: usize, ndim: usize, seed: u64) -> SyntheticSpec {
        SyntheticSpec {
            n_train: 20,
            n_test: 5,
            dim,
            idim,
            ndim,
            seed,
        }
    }

    #[test]
    fn complement_matches_enumeration() {
        for seed in 0..20 {
            let data = SyntheticData::new(spec(40, 1 + seed as usize % 30, 0, seed)).unwrap();
            let free: Vec<u32> = (0..40).filter(|i| !data.informative().contains(i)).collect();
            for (rank, &expected) in free.iter().enumerate() {
                assert_eq!(data.complement(rank), expected);
            }
        }
    }

    #[test]
    fn structure_of_one_example() {
        let s = SyntheticSpec {
            n_train: 1,
            ..spec(4, 2, 1, 11)
        };
        let syn = generate_synthetic(s).unwrap();
        let ex: Vec<_> = syn.train.open().unwrap().collect::<Result<_>>().unwrap();
        assert_eq!(ex.len(), 1);
        assert_eq!(ex[0].nnz(), 3);
        let on_s = ex[0]
            .indices()
            .iter()
            .filter(|&&i| syn.ground_truth.contains(&(i as usize)))
            .count();
        assert_eq!(on_s, 2);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(SyntheticData::new(spec(10, 6, 5, 0)).is_err());
        assert!(SyntheticData::new(spec(10, 0, 5, 0)).is_err());
        assert!(SyntheticData::new(SyntheticSpec {
            n_train: 0,
            ..spec(10, 2, 2, 0)
        })
        .is_err());
        assert!(SyntheticData::new(spec(10, 5, 5, 0)).is_ok());
    }

    #[test]
    fn negated_truth_flips_labels() {
        let data = Arc::new(SyntheticData::new(spec(50, 5, 10, 3)).unwrap());
        let flipped = Arc::new(data.negated());
        for (a, b) in data.stream(Split::Train).zip(flipped.stream(Split::Train)) {
            assert_eq!(a.indices(), b.indices());
            assert_eq!(a.values(), b.values());
            assert_eq!(a.label(), b.label().flipped());
        }
    }

    #[test]
    fn splits_differ_and_are_reproducible() {
        let data = Arc::new(SyntheticData::new(spec(100, 5, 10, 9)).unwrap());
        let a: Vec<_> = data.stream(Split::Train).collect();
        let b: Vec<_> = data.stream(Split::Train).collect();
        let t: Vec<_> = data.stream(Split::Test).collect();
        assert_eq!(a, b);
        assert_ne!(a[..5], t[..]);
    }
}
