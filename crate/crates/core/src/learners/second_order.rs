use crate::error::{Error, Result};
use crate::sparse::{DenseVector, SparseExample};
use crate::topb::{Offer, TopBTracker};

use super::OnlineLearner;

/// One diagonal AROW step on the nonzero coordinates of `ex`.
///
/// Does nothing and returns `false` when the squared hinge loss is zero.
/// Otherwise, with `β = 1 / (xᵀΣx + γ)` and `g = -2 max(0, 1 - y μ·x) y x`,
/// every touched coordinate gets `μ_j -= β Σ_j g_j / 2` and
/// `Σ_j = Σ_j / (1 + Σ_j x_j² / γ)`. The divisor is never below 1, so the
/// rounded covariance can never exceed its previous value. `sigma` must have
/// fill value 1 so that untouched coordinates read as unit variance.
#[inline]
pub fn arow_step(mu: &mut DenseVector, sigma: &mut DenseVector, gamma: f64, ex: &SparseExample) -> bool {
    debug_assert_eq!(sigma.fill_value(), 1.0);
    // One pass for both sums so the loads of mu[j] and sigma[j] overlap.
    let (mut score, mut confidence) = (0.0, 0.0);
    for (j, x) in ex.iter() {
        score += mu.get(j) * x;
        confidence += sigma.get(j) * x * x;
    }
    let loss = 1.0 - ex.y() * score;
    if loss <= 0.0 {
        return false;
    }
    let beta = 1.0 / (confidence + gamma);
    let scale = -2.0 * loss * ex.y();
    let inv_gamma = 1.0 / gamma;

    let dim = ex.dim();
    mu.grow_to(dim);
    sigma.grow_to(dim);
    let (mu, sigma) = (mu.as_mut_slice(), sigma.as_mut_slice());
    for (j, x) in ex.iter() {
        let s = sigma[j];
        let g = scale * x;
        mu[j] -= 0.5 * beta * s * g;
        sigma[j] = (s / (1.0 + s * x * x * inv_gamma)).max(f64::MIN_POSITIVE);
    }
    true
}

/// Diagonal AROW over the full feature set, no selection.
#[derive(Debug, Clone)]
pub struct ArowModel {
    mu: DenseVector,
    sigma: DenseVector,
    gamma: f64,
}

impl ArowModel {
    pub fn new(gamma: f64) -> Self {
        ArowModel {
            mu: DenseVector::zeros(),
            sigma: DenseVector::filled(1.0),
            gamma,
        }
    }

    pub(crate) fn from_parts(mu: DenseVector, sigma: DenseVector, gamma: f64) -> Self {
        ArowModel { mu, sigma, gamma }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mean(&self) -> &DenseVector {
        &self.mu
    }

    pub fn covariance(&self) -> &DenseVector {
        &self.sigma
    }
}

impl OnlineLearner for ArowModel {
    fn weights(&self) -> &DenseVector {
        &self.mu
    }

    #[inline]
    fn update(&mut self, ex: &SparseExample) -> bool {
        arow_step(&mut self.mu, &mut self.sigma, self.gamma, ex)
    }
}

/// Second-order online feature selection: an AROW step followed by keeping
/// only the `budget` touched features with the smallest covariance.
///
/// Features outside the tracker always have zero mean. Evicted features keep
/// their covariance; if they are admitted again later their mean restarts
/// from zero.
#[derive(Debug, Clone)]
pub struct SofsModel {
    mu: DenseVector,
    sigma: DenseVector,
    gamma: f64,
    tracker: TopBTracker,
    // coordinates of the current example that were not kept before it
    newcomers: Vec<usize>,
}

impl SofsModel {
    pub fn new(gamma: f64, budget: usize) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::config(format!("gamma must be positive, got {gamma}")));
        }
        Ok(SofsModel {
            mu: DenseVector::zeros(),
            sigma: DenseVector::filled(1.0),
            gamma,
            tracker: TopBTracker::new(budget)?,
            newcomers: Vec::new(),
        })
    }

    /// Rebuilds a model from stored mean and covariance. The tracker is
    /// repopulated from every coordinate whose covariance is below 1; means
    /// outside the resulting kept set must be zero.
    pub(crate) fn from_parts(mu: DenseVector, sigma: DenseVector, gamma: f64, budget: usize) -> Result<Self> {
        let mut model = SofsModel::new(gamma, budget)?;
        for (j, &s) in sigma.as_slice().iter().enumerate() {
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::config(format!(
                    "covariance of feature {j} is {s}, outside (0, 1]"
                )));
            }
            if s < 1.0 {
                model.tracker.offer(j, s);
            }
        }
        for (j, &m) in mu.as_slice().iter().enumerate() {
            if m != 0.0 && !model.tracker.contains(j) {
                return Err(Error::config(format!(
                    "feature {j} has a nonzero mean but is not among the {budget} most confident"
                )));
            }
        }
        model.mu = mu;
        model.sigma = sigma;
        Ok(model)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn budget(&self) -> usize {
        self.tracker.capacity()
    }

    pub fn mean(&self) -> &DenseVector {
        &self.mu
    }

    pub fn covariance(&self) -> &DenseVector {
        &self.sigma
    }

    pub fn tracker(&self) -> &TopBTracker {
        &self.tracker
    }
}

impl OnlineLearner for SofsModel {
    fn weights(&self) -> &DenseVector {
        &self.mu
    }

    fn update(&mut self, ex: &SparseExample) -> bool {
        if !arow_step(&mut self.mu, &mut self.sigma, self.gamma, ex) {
            return false;
        }

        // Lower the kept entries first so every stored value is current
        // before newcomers are compared against the root.
        self.newcomers.clear();
        for &j in ex.indices() {
            let j = j as usize;
            if self.tracker.contains(j) {
                self.tracker.offer(j, self.sigma.get(j));
            } else {
                self.newcomers.push(j);
            }
        }

        let mu = self.mu.as_mut_slice();
        for &j in &self.newcomers {
            match self.tracker.offer(j, self.sigma.get(j)) {
                Offer::Admitted | Offer::AdjustedInPlace => {}
                Offer::AdmittedEvicting(evicted) => mu[evicted] = 0.0,
                Offer::Rejected => mu[j] = 0.0,
            }
        }
        true
    }
}
