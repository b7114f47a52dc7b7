use std::cmp::Ordering;

use crate::sparse::{margin, DenseVector, Label, SparseExample};

use super::OnlineLearner;

/// Which first-order rule a [`FirstOrderModel`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstOrderRule {
    /// On a mistake, `w += η y x`, then truncate to the budget.
    Pet,
    /// On a mistake, `w = (1 - λη) w + η y x`, project onto the ℓ2 ball of
    /// radius `1/√λ`, then truncate to the budget.
    Fofs,
    /// While the margin is below 1, `w += (η/√t) y x`. No budget.
    Ogd,
}

#[derive(Debug, Clone)]
pub struct FirstOrderModel {
    rule: FirstOrderRule,
    w: DenseVector,
    eta: f64,
    lambda: f64,
    budget: Option<usize>,
    // examples seen, for the OGD step schedule
    steps: u64,
}

impl FirstOrderModel {
    pub fn pet(eta: f64, budget: usize) -> Self {
        FirstOrderModel::with_rule(FirstOrderRule::Pet, eta, 0.0, Some(budget))
    }

    pub fn fofs(eta: f64, lambda: f64, budget: usize) -> Self {
        FirstOrderModel::with_rule(FirstOrderRule::Fofs, eta, lambda, Some(budget))
    }

    pub fn ogd(eta: f64) -> Self {
        FirstOrderModel::with_rule(FirstOrderRule::Ogd, eta, 0.0, None)
    }

    fn with_rule(rule: FirstOrderRule, eta: f64, lambda: f64, budget: Option<usize>) -> Self {
        FirstOrderModel {
            rule,
            w: DenseVector::zeros(),
            eta,
            lambda,
            budget,
            steps: 0,
        }
    }

    pub(crate) fn restore(mut self, w: DenseVector, steps: u64) -> Self {
        self.w = w;
        self.steps = steps;
        self
    }

    pub fn rule(&self) -> FirstOrderRule {
        self.rule
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn add_scaled(&mut self, ex: &SparseExample, step: f64) {
        self.w.grow_to(ex.dim());
        let w = self.w.as_mut_slice();
        let scale = step * ex.y();
        for (j, x) in ex.iter() {
            w[j] += scale * x;
        }
    }

    fn is_mistake(&self, ex: &SparseExample) -> bool {
        Label::from_score(crate::sparse::sparse_dot(&self.w, ex)) != ex.label()
    }

    fn pet_update(&mut self, ex: &SparseExample) -> bool {
        if !self.is_mistake(ex) {
            return false;
        }
        self.add_scaled(ex, self.eta);
        truncate(&mut self.w, self.budget.unwrap_or(usize::MAX));
        true
    }

    fn fofs_update(&mut self, ex: &SparseExample) -> bool {
        if !self.is_mistake(ex) {
            return false;
        }
        self.w.scale(1.0 - self.lambda * self.eta);
        self.add_scaled(ex, self.eta);
        let radius = 1.0 / self.lambda.sqrt();
        let norm = self.w.l2_norm();
        if norm > radius {
            self.w.scale(radius / norm);
        }
        truncate(&mut self.w, self.budget.unwrap_or(usize::MAX));
        true
    }

    fn ogd_update(&mut self, ex: &SparseExample) -> bool {
        self.steps += 1;
        if margin(&self.w, ex) >= 1.0 {
            return false;
        }
        let step = self.eta / (self.steps as f64).sqrt();
        self.add_scaled(ex, step);
        true
    }
}

impl OnlineLearner for FirstOrderModel {
    fn weights(&self) -> &DenseVector {
        &self.w
    }

    #[inline]
    fn update(&mut self, ex: &SparseExample) -> bool {
        match self.rule {
            FirstOrderRule::Pet => self.pet_update(ex),
            FirstOrderRule::Fofs => self.fofs_update(ex),
            FirstOrderRule::Ogd => self.ogd_update(ex),
        }
    }
}

/// Zeroes all but the `budget` largest-magnitude entries of `w`. Between
/// equal magnitudes the lower index is kept.
pub fn truncate(w: &mut DenseVector, budget: usize) {
    let mut nonzero: Vec<(usize, f64)> = w
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(i, &v)| (i, v.abs()))
        .collect();
    if nonzero.len() <= budget {
        return;
    }
    let rank = |a: &(usize, f64), b: &(usize, f64)| -> Ordering { b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)) };
    if budget > 0 {
        nonzero.select_nth_unstable_by(budget - 1, rank);
    }
    let w = w.as_mut_slice();
    for &(i, _) in &nonzero[budget..] {
        w[i] = 0.0;
    }
}
