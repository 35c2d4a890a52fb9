//! Seeded samplers for Bernoulli and Markov measures and their entropies.

pub mod measure;
pub mod rng;

pub use measure::{empirical_frequencies, shannon_entropy, Bernoulli, Markov, Measure, ProbabilityVector, SampledSource};
pub use rng::SplitMix64;
