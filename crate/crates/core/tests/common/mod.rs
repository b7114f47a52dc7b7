//! Test-only reference implementations and random inputs.
#![allow(dead_code)]

use ofs_core::{Label, SparseExample};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Values drawn from a small set so that equal covariances are common and
/// tie handling is exercised.
const TIE_PRONE: [f64; 6] = [1.0, -1.0, 0.5, -0.5, 2.0, -0.25];

/// A random stream over `dim` features with 1..=max_nnz nonzeros per example.
pub fn random_stream(seed: u64, n: usize, dim: usize, max_nnz: usize, tie_prone: bool) -> Vec<SparseExample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hidden: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    (0..n)
        .map(|_| {
            let nnz = rng.random_range(1..=max_nnz.min(dim));
            let mut idx: Vec<u32> = index::sample(&mut rng, dim, nnz)
                .into_iter()
                .map(|i| i as u32)
                .collect();
            idx.sort_unstable();
            let feats: Vec<(u32, f64)> = idx
                .into_iter()
                .map(|i| {
                    let v = if tie_prone {
                        TIE_PRONE[rng.random_range(0..TIE_PRONE.len())]
                    } else {
                        rng.random_range(-2.0..2.0)
                    };
                    (i, v)
                })
                .collect();
            let score: f64 = feats.iter().map(|&(i, v)| hidden[i as usize] * v).sum();
            // 10% label noise
            let mut label = Label::from_score(score);
            if rng.random_bool(0.1) {
                label = label.flipped();
            }
            SparseExample::new(label, feats).unwrap()
        })
        .collect()
}

/// SOFS without a heap: a diagonal AROW step, then sort every touched
/// feature by `(sigma, index)` and zero the means outside the first `budget`.
pub struct NaiveSofs {
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
    touched: Vec<bool>,
    gamma: f64,
    budget: usize,
}

impl NaiveSofs {
    pub fn new(dim: usize, gamma: f64, budget: usize) -> Self {
        NaiveSofs {
            mu: vec![0.0; dim],
            sigma: vec![1.0; dim],
            touched: vec![false; dim],
            gamma,
            budget,
        }
    }

    pub fn update(&mut self, ex: &SparseExample) {
        let y = ex.y();
        let mut dot = 0.0;
        for (j, x) in ex.iter() {
            dot += self.mu[j] * x;
        }
        let loss = 1.0 - y * dot;
        if loss <= 0.0 {
            return;
        }
        let mut conf = 0.0;
        for (j, x) in ex.iter() {
            conf += self.sigma[j] * x * x;
        }
        let beta = 1.0 / (conf + self.gamma);
        for (j, x) in ex.iter() {
            let s = self.sigma[j];
            let g = -2.0 * loss * y * x;
            self.mu[j] -= 0.5 * beta * s * g;
            self.sigma[j] = (s / (1.0 + s * x * x * (1.0 / self.gamma))).max(f64::MIN_POSITIVE);
            self.touched[j] = true;
        }
        let mut order: Vec<usize> = (0..self.mu.len()).filter(|&j| self.touched[j]).collect();
        order.sort_by(|&a, &b| self.sigma[a].total_cmp(&self.sigma[b]).then(a.cmp(&b)));
        for &j in order.iter().skip(self.budget) {
            self.mu[j] = 0.0;
        }
    }
}

/// `Σ_j w_j x_j` computed independently of the library.
pub fn dot(w: &[f64], ex: &SparseExample) -> f64 {
    ex.iter().map(|(j, x)| w.get(j).copied().unwrap_or(0.0) * x).sum()
}

/// `max(0, 1 - y w·x)^2` computed independently of the library.
pub fn squared_hinge_ref(w: &[f64], ex: &SparseExample) -> f64 {
    let h = (1.0 - ex.y() * dot(w, ex)).max(0.0);
    h * h
}

pub fn padded(v: &[f64], len: usize, fill: f64) -> Vec<f64> {
    let mut out = v.to_vec();
    out.resize(len.max(v.len()), fill);
    out
}
