use crate::error::{Error, Result};
use crate::learners::{Algorithm, Hyperparams, Model};
use crate::sparse::SparseExample;

use super::train::{evaluate, train_stream};

/// Candidate values per hyperparameter. Only the lists an algorithm uses are
/// searched; grid points are visited in lexicographic order of
/// `(gamma, eta, lambda)` as declared.
#[derive(Debug, Clone, PartialEq)]
pub struct CvGrid {
    pub gammas: Vec<f64>,
    pub etas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub folds: usize,
}

impl Default for CvGrid {
    fn default() -> Self {
        let d = Hyperparams::default();
        CvGrid {
            gammas: vec![d.gamma],
            etas: vec![d.eta],
            lambdas: vec![d.lambda],
            folds: 5,
        }
    }
}

impl CvGrid {
    pub fn validate(&self) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::config("cross-validation needs at least 2 folds"));
        }
        if self.gammas.is_empty() || self.etas.is_empty() || self.lambdas.is_empty() {
            return Err(Error::config("every candidate list must be non-empty"));
        }
        Ok(())
    }

    /// Grid points for `algo`, with unused hyperparameters taken from `base`.
    pub fn points(&self, algo: Algorithm, base: &Hyperparams) -> Vec<Hyperparams> {
        let pick =
            |used: bool, list: &[f64], fallback: f64| if used { list.to_vec() } else { vec![fallback] };
        let gammas = pick(algo.uses_gamma(), &self.gammas, base.gamma);
        let etas = pick(algo.uses_eta(), &self.etas, base.eta);
        let lambdas = pick(algo.uses_lambda(), &self.lambdas, base.lambda);
        let mut points = Vec::with_capacity(gammas.len() * etas.len() * lambdas.len());
        for &gamma in &gammas {
            for &eta in &etas {
                for &lambda in &lambdas {
                    points.push(Hyperparams {
                        gamma,
                        eta,
                        lambda,
                        budget: base.budget,
                    });
                }
            }
        }
        points
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome {
    pub best: Hyperparams,
    pub best_accuracy: f64,
    /// Mean validation accuracy of every grid point, in grid order.
    pub scores: Vec<(Hyperparams, f64)>,
}

/// K-fold cross-validation over contiguous blocks. Each fold trains one pass
/// over the remaining blocks in order and validates on the held-out block.
/// Ties go to the earliest grid point.
pub fn cross_validate(
    algo: Algorithm,
    grid: &CvGrid,
    base: &Hyperparams,
    train: &[SparseExample],
) -> Result<CvOutcome> {
    grid.validate()?;
    let k = grid.folds;
    let n = train.len();
    if n < k {
        return Err(Error::config(format!(
            "{n} examples cannot be split into {k} folds"
        )));
    }
    let bounds: Vec<usize> = (0..=k).map(|f| f * n / k).collect();

    let mut scores = Vec::new();
    for hp in grid.points(algo, base) {
        let mut total = 0.0;
        for f in 0..k {
            let (lo, hi) = (bounds[f], bounds[f + 1]);
            let mut model = Model::new(algo, &hp)?;
            let rest = train[..lo].iter().chain(&train[hi..]).cloned().map(Ok);
            train_stream(&mut model, rest)?;
            total += evaluate(&model, train[lo..hi].iter().cloned().map(Ok))?;
        }
        scores.push((hp, total / k as f64));
    }

    let (best, best_accuracy) = scores
        .iter()
        .fold(None::<(Hyperparams, f64)>, |acc, &(hp, s)| match acc {
            Some((_, b)) if b >= s => acc,
            _ => Some((hp, s)),
        })
        .expect("grid is non-empty");
    Ok(CvOutcome {
        best,
        best_accuracy,
        scores,
    })
}
