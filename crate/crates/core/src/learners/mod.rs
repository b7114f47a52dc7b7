//! Online update rules. Every learner is a single-example state machine
//! behind [`OnlineLearner`]; [`Model`] wraps them for runtime dispatch and
//! persistence.

mod first_order;
mod persist;
mod second_order;

use std::fmt;
use std::str::FromStr;

pub use first_order::{truncate, FirstOrderModel, FirstOrderRule};
pub use second_order::{arow_step, ArowModel, SofsModel};

use crate::error::{Error, Result};
use crate::sparse::{sparse_dot, DenseVector, Label, SparseExample};

/// Learning algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Second-order online feature selection.
    Sofs,
    /// Perceptron with truncation.
    Pet,
    /// First-order OFS via sparse projection.
    Fofs,
    /// Online gradient descent on the full feature set.
    Ogd,
    /// Diagonal AROW on the full feature set.
    Arow,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Sofs,
        Algorithm::Pet,
        Algorithm::Fofs,
        Algorithm::Ogd,
        Algorithm::Arow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sofs => "sofs",
            Algorithm::Pet => "pet",
            Algorithm::Fofs => "fofs",
            Algorithm::Ogd => "ogd",
            Algorithm::Arow => "arow",
        }
    }

    /// Whether the algorithm enforces a feature budget.
    pub fn selects_features(self) -> bool {
        matches!(self, Algorithm::Sofs | Algorithm::Pet | Algorithm::Fofs)
    }

    pub fn uses_gamma(self) -> bool {
        matches!(self, Algorithm::Sofs | Algorithm::Arow)
    }

    pub fn uses_eta(self) -> bool {
        matches!(self, Algorithm::Pet | Algorithm::Fofs | Algorithm::Ogd)
    }

    pub fn uses_lambda(self) -> bool {
        self == Algorithm::Fofs
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::config(format!(
                    "unknown algorithm {s:?} (expected sofs, pet, fofs, ogd or arow)"
                ))
            })
    }
}

/// Learner hyperparameters. Fields an algorithm does not use are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparams {
    /// AROW regularization, > 0.
    pub gamma: f64,
    /// Learning rate, >= 0.
    pub eta: f64,
    /// FOFS regularization, > 0.
    pub lambda: f64,
    /// Feature budget, required by the selecting algorithms.
    pub budget: Option<usize>,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            gamma: 1.0,
            eta: 0.2,
            lambda: 0.01,
            budget: None,
        }
    }
}

impl Hyperparams {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = Some(budget);
        self
    }

    /// Checks that every hyperparameter `algo` uses is in range.
    pub fn validate(&self, algo: Algorithm) -> Result<()> {
        if algo.uses_gamma() && !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::config(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if algo.uses_eta() && !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(Error::config(format!(
                "eta must be non-negative, got {}",
                self.eta
            )));
        }
        if algo.uses_lambda() && !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::config(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if algo.selects_features() {
            match self.budget {
                None => return Err(Error::config(format!("{algo} requires a feature budget B"))),
                Some(0) => return Err(Error::config("feature budget must be at least 1")),
                Some(_) => {}
            }
        }
        Ok(())
    }
}

pub trait OnlineLearner {
    /// The weight vector used for prediction.
    fn weights(&self) -> &DenseVector;

    /// Processes one example. Returns `true` if the example triggered an
    /// update.
    fn update(&mut self, ex: &SparseExample) -> bool;

    fn score(&self, x: &SparseExample) -> f64 {
        sparse_dot(self.weights(), x)
    }

    fn predict(&self, x: &SparseExample) -> Label {
        Label::from_score(self.score(x))
    }

    fn nnz(&self) -> usize {
        self.weights().nnz()
    }
}

impl<L: OnlineLearner + ?Sized> OnlineLearner for &mut L {
    fn weights(&self) -> &DenseVector {
        (**self).weights()
    }

    fn update(&mut self, ex: &SparseExample) -> bool {
        (**self).update(ex)
    }
}

impl<L: OnlineLearner + ?Sized> OnlineLearner for Box<L> {
    fn weights(&self) -> &DenseVector {
        (**self).weights()
    }

    fn update(&mut self, ex: &SparseExample) -> bool {
        (**self).update(ex)
    }
}

/// Any of the supported learners.
#[derive(Debug, Clone)]
pub enum Model {
    Sofs(SofsModel),
    Arow(ArowModel),
    FirstOrder(FirstOrderModel),
}

impl Model {
    pub fn new(algo: Algorithm, hp: &Hyperparams) -> Result<Model> {
        hp.validate(algo)?;
        Ok(match algo {
            Algorithm::Sofs => Model::Sofs(SofsModel::new(hp.gamma, hp.budget.unwrap_or(1))?),
            Algorithm::Arow => Model::Arow(ArowModel::new(hp.gamma)),
            Algorithm::Pet => Model::FirstOrder(FirstOrderModel::pet(hp.eta, hp.budget.unwrap_or(1))),
            Algorithm::Fofs => {
                Model::FirstOrder(FirstOrderModel::fofs(hp.eta, hp.lambda, hp.budget.unwrap_or(1)))
            }
            Algorithm::Ogd => Model::FirstOrder(FirstOrderModel::ogd(hp.eta)),
        })
    }

    pub fn algorithm(&self) -> Algorithm {
        match self {
            Model::Sofs(_) => Algorithm::Sofs,
            Model::Arow(_) => Algorithm::Arow,
            Model::FirstOrder(m) => match m.rule() {
                FirstOrderRule::Pet => Algorithm::Pet,
                FirstOrderRule::Fofs => Algorithm::Fofs,
                FirstOrderRule::Ogd => Algorithm::Ogd,
            },
        }
    }

    /// The feature budget, if the learner has one.
    pub fn budget(&self) -> Option<usize> {
        match self {
            Model::Sofs(m) => Some(m.budget()),
            Model::Arow(_) => None,
            Model::FirstOrder(m) => m.budget(),
        }
    }

    /// Indices of nonzero weights, ascending.
    pub fn selected(&self) -> Vec<usize> {
        self.weights().nonzero_indices()
    }
}

impl OnlineLearner for Model {
    fn weights(&self) -> &DenseVector {
        match self {
            Model::Sofs(m) => m.weights(),
            Model::Arow(m) => m.weights(),
            Model::FirstOrder(m) => m.weights(),
        }
    }

    #[inline]
    fn update(&mut self, ex: &SparseExample) -> bool {
        match self {
            Model::Sofs(m) => m.update(ex),
            Model::Arow(m) => m.update(ex),
            Model::FirstOrder(m) => m.update(ex),
        }
    }
}
