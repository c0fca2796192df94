//! Exact computation with subword (subsequence) statistics of random words.
//!
//! A statistic is a formal rational combination of patterns, evaluated on a
//! text by counting subsequence occurrences. The crate grades such
//! combinations by their order of magnitude under two random-word models and
//! produces the subspaces on which the limiting covariance is diagonal:
//!
//! * i.i.d. letters with a fixed distribution ([`onesample`], [`polyspaces`]);
//! * uniformly shuffled words with fixed letter counts ([`multisample`]).
//!
//! Everything on the exact path uses arbitrary-precision rationals.

pub mod error;
pub mod graded;
pub mod linalg;
mod memo;
pub mod multisample;
pub mod onesample;
pub mod operators;
pub mod polyspaces;
pub mod rational;
pub mod statistics;
pub mod words;

pub use error::{Error, Result};
pub use graded::{GradedDecomposition, GradedPart, SpaceComponent};
pub use linalg::{BilinearForm, Matrix, Subspace};
pub use rational::Q;
pub use words::{Alphabet, Combination, Composition, Word};
