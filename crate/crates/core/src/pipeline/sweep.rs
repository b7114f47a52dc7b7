use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::learners::{Algorithm, Hyperparams, Model, OnlineLearner};

use super::loader::LoaderMode;
use super::permute::{permute, DEFAULT_MEMORY_BUDGET};
use super::report::{sparsity_pct, RunReport};
use super::train::{evaluate, train_dataset};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub algos: Vec<Algorithm>,
    /// Budgets for the selecting learners. Non-selecting learners run once
    /// per repeat.
    pub budgets: Vec<usize>,
    pub repeats: usize,
    /// Repeat `r` shuffles the training set with seed `seed + r`.
    pub seed: u64,
    pub hyper: Hyperparams,
    pub loader: LoaderMode,
    pub memory_budget: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            algos: vec![Algorithm::Sofs, Algorithm::Pet, Algorithm::Fofs],
            budgets: vec![50, 100, 200, 400],
            repeats: 10,
            seed: 0,
            hyper: Hyperparams::default(),
            loader: LoaderMode::default(),
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

/// Trains `algo` once on `train` in stream order and evaluates on `test`.
pub fn run_once(
    algo: Algorithm,
    hp: &Hyperparams,
    train: &Dataset,
    test: &Dataset,
    loader: LoaderMode,
    seed: u64,
) -> Result<(Model, RunReport)> {
    let mut model = Model::new(algo, hp)?;
    let outcome = train_dataset(&mut model, train, loader)?;
    let accuracy = evaluate(&model, test.open()?)?;
    let dim = train
        .dim_hint()
        .unwrap_or(outcome.dim)
        .max(outcome.dim)
        .max(model.weights().len());
    let selected = model.selected();
    let report = RunReport {
        algo,
        budget: hp.budget.filter(|_| algo.selects_features()).unwrap_or(dim),
        seed,
        accuracy,
        mistakes: outcome.mistakes,
        sparsity_pct: sparsity_pct(selected.len(), dim),
        train_seconds: outcome.train_seconds,
        total_seconds: outcome.total_seconds,
        dim,
        selected,
    };
    Ok((model, report))
}

/// Runs every `(algo, budget, repeat)` combination. Within a repeat all runs
/// see the same permutation of the training set.
pub fn benchmark_sweep(cfg: &SweepConfig, train: &Dataset, test: &Dataset) -> Result<Vec<RunReport>> {
    if cfg.algos.is_empty() {
        return Err(Error::config("no algorithms to sweep"));
    }
    if cfg.algos.iter().any(|a| a.selects_features()) && cfg.budgets.is_empty() {
        return Err(Error::config("no budgets to sweep"));
    }
    let mut reports = Vec::new();
    for r in 0..cfg.repeats {
        let seed = cfg.seed.wrapping_add(r as u64);
        let permuted = permute(train, seed, cfg.memory_budget)?;
        for &algo in &cfg.algos {
            if algo.selects_features() {
                for &b in &cfg.budgets {
                    let hp = cfg.hyper.with_budget(b);
                    reports.push(run_once(algo, &hp, &permuted.dataset, test, cfg.loader, seed)?.1);
                }
            } else {
                reports.push(run_once(algo, &cfg.hyper, &permuted.dataset, test, cfg.loader, seed)?.1);
            }
        }
    }
    Ok(reports)
}
