//! Shared sparse/dense vector types and the prediction and loss primitives
//! every learner is built from.
//!
//! The sign convention is fixed crate-wide: a score of exactly zero predicts
//! `+1`.

use std::fmt;

use crate::error::{Error, Result};

/// Binary class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    /// Sign of a score, with `sign(0) = +1`.
    #[inline]
    pub fn from_score(score: f64) -> Label {
        if score >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Negative => Label::Positive,
            Label::Positive => Label::Negative,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Negative => f.write_str("-1"),
            Label::Positive => f.write_str("+1"),
        }
    }
}

/// One labelled sparse example. Indices are 0-based, strictly increasing and
/// no stored value is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseExample {
    label: Label,
    indices: Vec<u32>,
    values: Vec<f64>,
}

impl SparseExample {
    /// Builds an example from `(index, value)` pairs, dropping zero values.
    /// Fails if indices are not strictly increasing or a value is not finite.
    pub fn new<I>(label: Label, features: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for (idx, value) in features {
            if let Some(&last) = indices.last() {
                if idx <= last {
                    return Err(Error::config(format!(
                        "feature indices must be strictly increasing ({idx} after {last})"
                    )));
                }
            }
            if !value.is_finite() {
                return Err(Error::config(format!(
                    "feature {idx} has non-finite value {value}"
                )));
            }
            if value != 0.0 {
                indices.push(idx);
                values.push(value);
            }
        }
        Ok(SparseExample {
            label,
            indices,
            values,
        })
    }

    /// Builds an example from parallel arrays that the caller guarantees to
    /// already satisfy the invariants.
    pub(crate) fn from_parts_unchecked(label: Label, indices: Vec<u32>, values: Vec<f64>) -> Self {
        debug_assert_eq!(indices.len(), values.len());
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(values.iter().all(|&v| v != 0.0));
        SparseExample {
            label,
            indices,
            values,
        }
    }

    #[inline]
    pub fn label(&self) -> Label {
        self.label
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.label.as_f64()
    }

    #[inline]
    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices
            .iter()
            .zip(&self.values)
            .map(|(&i, &v)| (i as usize, v))
    }

    /// One past the largest index, or 0 for an empty example.
    pub fn dim(&self) -> usize {
        self.indices.last().map_or(0, |&i| i as usize + 1)
    }

    pub fn with_label(mut self, label: Label) -> Self {
        self.label = label;
        self
    }
}

/// A dense vector of `f64` that grows on demand. Reads past the end return the
/// fill value; writes past the end extend the vector with it.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    values: Vec<f64>,
    fill: f64,
}

impl Default for DenseVector {
    fn default() -> Self {
        DenseVector::zeros()
    }
}

impl DenseVector {
    pub fn zeros() -> Self {
        DenseVector::filled(0.0)
    }

    /// An empty vector whose implicit entries all equal `fill`.
    pub fn filled(fill: f64) -> Self {
        DenseVector {
            values: Vec::new(),
            fill,
        }
    }

    pub fn from_vec(values: Vec<f64>) -> Self {
        DenseVector { values, fill: 0.0 }
    }

    #[inline]
    pub fn fill_value(&self) -> f64 {
        self.fill
    }

    /// Number of materialized entries.
    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, idx: usize) -> f64 {
        self.values.get(idx).copied().unwrap_or(self.fill)
    }

    #[inline]
    pub fn get_mut(&mut self, idx: usize) -> &mut f64 {
        if idx >= self.values.len() {
            self.grow_to(idx + 1);
        }
        &mut self.values[idx]
    }

    #[inline]
    pub fn set(&mut self, idx: usize, value: f64) {
        *self.get_mut(idx) = value;
    }

    /// Extends the vector to at least `len` entries. Never shrinks.
    pub fn grow_to(&mut self, len: usize) {
        if len > self.values.len() {
            self.values.resize(len, self.fill);
        }
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Count of materialized entries that are nonzero.
    pub fn nnz(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0.0).count()
    }

    /// Indices of nonzero materialized entries, ascending.
    pub fn nonzero_indices(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.values {
            *v *= factor;
        }
    }
}

/// `w · x` over the nonzero entries of `x`; indices beyond `w` read as zero.
#[inline]
pub fn sparse_dot(w: &DenseVector, x: &SparseExample) -> f64 {
    let dense = w.as_slice();
    let mut acc = 0.0;
    for (&i, &v) in x.indices.iter().zip(&x.values) {
        if let Some(&wi) = dense.get(i as usize) {
            acc += wi * v;
        }
    }
    acc
}

#[inline]
pub fn predict(w: &DenseVector, x: &SparseExample) -> Label {
    Label::from_score(sparse_dot(w, x))
}

/// Signed margin `y (w · x)`.
#[inline]
pub fn margin(w: &DenseVector, x: &SparseExample) -> f64 {
    x.y() * sparse_dot(w, x)
}

/// `max(0, 1 - margin)`
#[inline]
pub fn hinge_from_margin(margin: f64) -> f64 {
    (1.0 - margin).max(0.0)
}

/// `max(0, 1 - y (w · x))`
pub fn hinge(w: &DenseVector, x: &SparseExample) -> f64 {
    hinge_from_margin(margin(w, x))
}

/// `max(0, 1 - y (w · x))^2`
pub fn squared_hinge(w: &DenseVector, x: &SparseExample) -> f64 {
    let h = hinge(w, x);
    h * h
}

/// Gradient of the squared hinge with respect to `w`, restricted to the
/// nonzero coordinates of `x`: `-2 max(0, 1 - y w·x) y x_j`, in the order of
/// `x.indices()`.
pub fn squared_hinge_gradient(w: &DenseVector, x: &SparseExample) -> Vec<f64> {
    let scale = -2.0 * hinge(w, x) * x.y();
    x.values().iter().map(|&v| scale * v).collect()
}
