//! Exact computation with geodesic currents, Stallings subgroup graphs and
//! simplicial trees over a finitely generated free group.
//!
//! All quantities are exact: words are letter vectors, weights and lengths
//! are arbitrary-precision rationals. Floating point appears only in Monte
//! Carlo estimators and convergence diagnostics.

pub mod automorphisms;
pub mod currents;
pub mod error;
pub mod experiments;
mod fold;
pub mod format;
pub mod par;
pub mod rational;
pub mod stallings;
pub mod trees;
pub mod words;

pub use automorphisms::{Automorphism, OuterKey};
pub use currents::{FrequencyTable, RationalCurrent};
pub use error::{Error, Result};
pub use rational::Rational;
pub use stallings::StallingsGraph;
pub use trees::{MarkedMetricGraph, Splitting, Tree};
pub use words::{Basis, CyclicWord, Letter, Word};
