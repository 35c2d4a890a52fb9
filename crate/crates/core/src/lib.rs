//! Computable groups and Følner sequences, a depth-first code for connected
//! sets, greedy quasi-tilings, subshift and measure entropies, and decodable
//! complexity estimators for windows of configurations.

pub mod complexity;
pub mod error;
pub mod folner;
pub mod group;
pub mod quasitiling;
pub mod setcodec;
pub mod stochastic;
pub mod symbolic;

pub use error::{Error, Result};
pub use group::{FiniteSubset, Group, GroupElement, GroupKind, Point};

/// A letter, stored as its position in the alphabet.
pub type Symbol = u8;

/// Exact rational used for defects, densities and slacks.
pub type Rational = num_rational::Ratio<i128>;
