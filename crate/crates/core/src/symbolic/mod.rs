//! Configurations over a group, the shift action, cellular maps and
//! subshifts of finite type.

pub mod alphabet;
pub mod cellular;
pub mod config;
pub mod sft;
pub mod source;

pub use alphabet::Alphabet;
pub use cellular::{apply_cellular, CellularMap};
pub use config::{hamming, translate, PartialConfiguration};
pub use sft::{admissible_patterns, q_count_bound, topological_entropy_estimate, PatternCount, QBound, Sft};
pub use source::{restrict, CellularImage, ConfigurationSource, ConstantSource, FiniteSource};
