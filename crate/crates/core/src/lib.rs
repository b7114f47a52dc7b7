//! Online feature selection for sparse, high-dimensional binary
//! classification streams.
//!
//! The main learner is [`SofsModel`]: a diagonal AROW update followed by
//! keeping only the `B` features with the smallest covariance, tracked by an
//! indexed max-heap ([`TopBTracker`]) so that each update costs
//! `O(m log B)` for an example with `m` nonzeros rather than `O(d)`.
//! First-order baselines (PET, FOFS) and non-selecting baselines (OGD, AROW)
//! share the same [`OnlineLearner`] interface.
//!
//! [`data`] reads libsvm files and generates synthetic streams with known
//! informative features; [`pipeline`] trains, evaluates, cross-validates and
//! runs budget sweeps.

pub mod data;
pub mod error;
pub mod learners;
pub mod pipeline;
pub mod sparse;
pub mod topb;

pub use error::{Error, Result};
pub use learners::{
    Algorithm, ArowModel, FirstOrderModel, FirstOrderRule, Hyperparams, Model, OnlineLearner, SofsModel,
};
pub use sparse::{
    hinge, margin, predict, sparse_dot, squared_hinge, squared_hinge_gradient, DenseVector, Label,
    SparseExample,
};
pub use topb::{Offer, TopBTracker};
