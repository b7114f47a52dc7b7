use std::time::{Duration, Instant};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::learners::OnlineLearner;
use crate::sparse::{Label, SparseExample};

use super::loader::{with_loaded, LoaderMode};

/// Counters from one training pass.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TrainOutcome {
    pub examples: u64,
    /// Examples whose pre-update prediction was wrong.
    pub mistakes: u64,
    /// Examples that triggered a model update.
    pub updates: u64,
    /// One past the largest feature index seen.
    pub dim: usize,
    /// Time spent inside update calls.
    pub train_seconds: f64,
    /// Wall time of the whole pass, loading included.
    pub total_seconds: f64,
}

/// Feeds every example of `stream` to `learner` exactly once, in order.
pub fn train_stream<L, I>(learner: &mut L, stream: I) -> Result<TrainOutcome>
where
    L: OnlineLearner + ?Sized,
    I: IntoIterator<Item = Result<SparseExample>>,
{
    let start = Instant::now();
    let mut out = TrainOutcome::default();
    let mut learning = Duration::ZERO;
    for item in stream {
        let ex = item.map_err(|e| Error::Example {
            ordinal: out.examples + 1,
            source: Box::new(e),
        })?;
        out.examples += 1;
        out.dim = out.dim.max(ex.dim());
        let t0 = Instant::now();
        if learner.predict(&ex) != ex.label() {
            out.mistakes += 1;
        }
        if learner.update(&ex) {
            out.updates += 1;
        }
        learning += t0.elapsed();
    }
    out.train_seconds = learning.as_secs_f64();
    out.total_seconds = start.elapsed().as_secs_f64();
    Ok(out)
}

/// Opens `data` and trains on it through the given loader.
pub fn train_dataset<L>(learner: &mut L, data: &Dataset, mode: LoaderMode) -> Result<TrainOutcome>
where
    L: OnlineLearner + ?Sized,
{
    let start = Instant::now();
    let source = data.open()?;
    let mut out = with_loaded(source, mode, |stream| train_stream(learner, stream))?;
    out.total_seconds = start.elapsed().as_secs_f64();
    Ok(out)
}

/// Fraction of examples predicted correctly. The model is not modified.
pub fn evaluate<L, I>(model: &L, stream: I) -> Result<f64>
where
    L: OnlineLearner + ?Sized,
    I: IntoIterator<Item = Result<SparseExample>>,
{
    let (mut total, mut correct) = (0u64, 0u64);
    for item in stream {
        let ex = item.map_err(|e| Error::Example {
            ordinal: total + 1,
            source: Box::new(e),
        })?;
        total += 1;
        if model.predict(&ex) == ex.label() {
            correct += 1;
        }
    }
    if total == 0 {
        return Err(Error::config("cannot evaluate on an empty dataset"));
    }
    Ok(correct as f64 / total as f64)
}

pub fn predictions<L, I>(model: &L, stream: I) -> Result<Vec<Label>>
where
    L: OnlineLearner + ?Sized,
    I: IntoIterator<Item = Result<SparseExample>>,
{
    stream
        .into_iter()
        .map(|item| item.map(|ex| model.predict(&ex)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{Algorithm, Hyperparams, Model};

    fn ex(label: Label, feats: &[(u32, f64)]) -> SparseExample {
        SparseExample::new(label, feats.iter().copied()).unwrap()
    }

    #[test]
    fn empty_stream_leaves_model_untouched() {
        let mut m = Model::new(Algorithm::Arow, &Hyperparams::default()).unwrap();
        let out = train_stream(&mut m, std::iter::empty()).unwrap();
        assert_eq!((out.examples, out.mistakes), (0, 0));
        assert!(m.weights().is_empty());
    }

    #[test]
    fn zero_model_misses_negative_example() {
        let mut m = Model::new(Algorithm::Ogd, &Hyperparams::default()).unwrap();
        let out = train_stream(&mut m, [Ok(ex(Label::Negative, &[(0, 1.0)]))]).unwrap();
        assert_eq!(out.mistakes, 1);
        assert_eq!(out.updates, 1);
    }

    #[test]
    fn arow_learns_separable_toy_set() {
        // separable by w = (1, -1)
        let data = [
            ex(Label::Positive, &[(0, 1.0), (1, 0.2)]),
            ex(Label::Negative, &[(0, 0.1), (1, 1.0)]),
            ex(Label::Positive, &[(0, 0.9), (1, -0.3)]),
            ex(Label::Negative, &[(0, -0.5), (1, 0.4)]),
        ];
        let mut m = Model::new(Algorithm::Arow, &Hyperparams::default()).unwrap();
        train_stream(&mut m, data.iter().cloned().map(Ok)).unwrap();
        assert_eq!(evaluate(&m, data.iter().cloned().map(Ok)).unwrap(), 1.0);
    }

    #[test]
    fn evaluate_is_pure_and_counts_correct() {
        let m = Model::new(Algorithm::Ogd, &Hyperparams::default()).unwrap();
        let pos: Vec<_> = (0..4).map(|i| ex(Label::Positive, &[(i, 1.0)])).collect();
        let neg: Vec<_> = (0..4).map(|i| ex(Label::Negative, &[(i, 1.0)])).collect();
        assert_eq!(evaluate(&m, pos.iter().cloned().map(Ok)).unwrap(), 1.0);
        assert_eq!(evaluate(&m, pos.iter().cloned().map(Ok)).unwrap(), 1.0);
        assert_eq!(evaluate(&m, neg.into_iter().map(Ok)).unwrap(), 0.0);
        assert!(evaluate(&m, std::iter::empty()).is_err());
    }

    #[test]
    fn errors_carry_ordinal() {
        let mut m = Model::new(Algorithm::Ogd, &Hyperparams::default()).unwrap();
        let stream = vec![Ok(ex(Label::Positive, &[(0, 1.0)])), Err(Error::config("bad"))];
        match train_stream(&mut m, stream) {
            Err(Error::Example { ordinal: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
