use bitvec::prelude::*;
use rayon::prelude::*;

use super::bits::Bits;
use super::freq::{freq_code_len, freq_decode, freq_encode, letter_counts};
use super::lz78::{lz78_code_len, lz78_decode, lz78_encode};
use crate::error::{Error, Result};
use crate::folner::FolnerSequence;
use crate::symbolic::{ConfigurationSource, PartialConfiguration};
use crate::Symbol;

/// Length in bits of a decodable description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityEstimate {
    pub bits: u64,
    pub estimator: String,
    pub input_len: usize,
}

impl ComplexityEstimate {
    pub fn rate(&self) -> f64 {
        if self.input_len == 0 {
            0.0
        } else {
            self.bits as f64 / self.input_len as f64
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Estimator {
    Freq,
    Lz78,
}

impl Estimator {
    pub const ALL: [Estimator; 2] = [Estimator::Freq, Estimator::Lz78];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::Freq => "freq",
            Estimator::Lz78 => "lz78",
        }
    }

    /// Parses `freq`, `lz78` or `all`.
    pub fn parse_list(text: &str) -> Result<Vec<Estimator>> {
        match text {
            "all" => Ok(Self::ALL.to_vec()),
            "freq" => Ok(vec![Estimator::Freq]),
            "lz78" => Ok(vec![Estimator::Lz78]),
            other => Err(Error::Parse(format!("unknown estimator `{other}`"))),
        }
    }

    pub fn encode(self, word: &[Symbol], alphabet_size: usize) -> Result<Bits> {
        match self {
            Estimator::Freq => freq_encode(word, alphabet_size),
            Estimator::Lz78 => lz78_encode(word, alphabet_size),
        }
    }

    pub fn decode(self, bits: &BitSlice<u64, Msb0>, alphabet_size: usize) -> Result<Vec<Symbol>> {
        match self {
            Estimator::Freq => freq_decode(bits, alphabet_size),
            Estimator::Lz78 => lz78_decode(bits, alphabet_size),
        }
    }

    /// Length of [`Estimator::encode`]'s output, computed without building it.
    pub fn code_len(self, word: &[Symbol], alphabet_size: usize) -> Result<u64> {
        match self {
            Estimator::Freq => Ok(freq_code_len(&letter_counts(word, alphabet_size)?)),
            Estimator::Lz78 => lz78_code_len(word, alphabet_size),
        }
    }

    pub fn estimate(self, word: &[Symbol], alphabet_size: usize) -> Result<ComplexityEstimate> {
        Ok(ComplexityEstimate {
            bits: self.code_len(word, alphabet_size)?,
            estimator: self.name().into(),
            input_len: word.len(),
        })
    }
}

/// Estimate for `cont(t)`; an empty window costs 0 bits.
pub fn window_estimate(t: &PartialConfiguration, estimator: Estimator, alphabet_size: usize) -> Result<ComplexityEstimate> {
    if t.is_empty() {
        return Ok(ComplexityEstimate { bits: 0, estimator: estimator.name().into(), input_len: 0 });
    }
    estimator.estimate(&t.cont(), alphabet_size)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateRecord {
    pub index: usize,
    pub size: u64,
    pub bits: f64,
    pub rate: f64,
}

impl RateRecord {
    pub fn new(index: usize, size: u64, bits: f64) -> Self {
        RateRecord { index, size, bits, rate: bits / size as f64 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateSeries {
    pub family: String,
    pub estimator: String,
    pub records: Vec<RateRecord>,
}

impl RateSeries {
    pub fn new(family: &str, estimator: &str) -> Self {
        RateSeries { family: family.into(), estimator: estimator.into(), records: Vec::new() }
    }

    pub fn push(&mut self, record: RateRecord) {
        self.records.push(record);
    }

    pub fn last_rate(&self) -> Option<f64> {
        self.records.last().map(|r| r.rate)
    }
}

/// One record per index in `from..=upto`: the estimator's bits on the
/// source's window over `F_i`. Indices are evaluated in parallel.
pub fn rate_series<S: ConfigurationSource + ?Sized>(
    source: &S,
    seq: &FolnerSequence,
    estimator: Estimator,
    from: usize,
    upto: usize,
) -> Result<RateSeries> {
    let from = from.max(seq.first_index());
    let k = source.alphabet_size();
    let records = (from..=upto)
        .into_par_iter()
        .map(|i| {
            let set = seq.set(i)?;
            let window = source.restrict(seq.group(), &set)?;
            let est = window_estimate(&window, estimator, k)?;
            Ok(RateRecord::new(i, set.len() as u64, est.bits as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RateSeries { family: seq.name().into(), estimator: estimator.name().into(), records })
}
