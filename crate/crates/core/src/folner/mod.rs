//! Følner sequences: built-in families, invariance defects, temperedness
//! witnesses and evidence of small description length.

pub mod describe;
pub mod invariance;
pub mod search;
pub mod sequence;

pub use describe::{description_bits, series_tail, set_code_lengths, SetCode};
pub use invariance::{defect, defect_report, geometric_modesty_check, temperedness_constant, DefectReport};
pub use search::{modest_search, DEFAULT_SEARCH_CAP};
pub use sequence::{builtin_sequences, Family, FolnerSequence};
