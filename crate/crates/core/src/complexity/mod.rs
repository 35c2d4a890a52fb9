//! Computable upper bounds on description length. Every coder here has a
//! matching decoder, so each bit count is the length of an actual
//! description.

pub mod bits;
pub mod estimate;
pub mod freq;
pub mod lz78;
pub mod repair;

pub use bits::{frame_parts, framing_overhead, unframe_parts, Bits};
pub use estimate::{rate_series, window_estimate, ComplexityEstimate, Estimator, RateRecord, RateSeries};
pub use freq::{freq_bound, freq_code_len, freq_decode, freq_encode};
pub use lz78::{lz78_code_len, lz78_decode, lz78_encode};
pub use repair::{repair_bound, repair_decode, repair_encode};
pub use crate::symbolic::hamming;

/// Frames the parts and reports the total length.
pub fn tuple_overhead(parts: &[Bits]) -> Result<ComplexityEstimate> {
    if parts.is_empty() {
        return Err(Error::Domain("at least one part is needed".into()));
    }
    let framed = frame_parts(parts);
    Ok(ComplexityEstimate {
        bits: framed.len() as u64,
        estimator: "tuple".into(),
        input_len: parts.iter().map(|p| p.len()).sum(),
    })
}

use crate::error::{Error, Result};
