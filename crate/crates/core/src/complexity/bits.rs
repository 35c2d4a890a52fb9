//! Bit strings, the doubled-digit self-delimiting integer code, and tuple
//! framing.
//!
//! A natural `n` is written as its binary digits (most significant first,
//! no digits at all for 0) with every digit doubled, followed by `01`.
//! Its length is therefore `2·bitlen(n) + 2`.

use bitvec::prelude::*;
use num_bigint::BigUint;

use crate::error::{Error, Result};

pub type Bits = BitVec<u64, Msb0>;

/// Number of binary digits of `n` (0 for `n = 0`), i.e. `ceil(log2(n + 1))`.
pub fn bit_length(n: u64) -> u32 {
    64 - n.leading_zeros()
}

pub fn self_delimiting_len(n: u64) -> u64 {
    2 * bit_length(n) as u64 + 2
}

pub fn write_self_delimiting(out: &mut Bits, n: u64) {
    write_self_delimiting_u128(out, n as u128)
}

pub fn self_delimiting_len_u128(n: u128) -> u64 {
    2 * (128 - n.leading_zeros()) as u64 + 2
}

pub fn write_self_delimiting_u128(out: &mut Bits, n: u128) {
    for k in (0..128 - n.leading_zeros()).rev() {
        let bit = (n >> k) & 1 == 1;
        out.push(bit);
        out.push(bit);
    }
    out.push(false);
    out.push(true);
}

/// Appends the lowest `width` bits of `value`, most significant first.
pub fn write_fixed(out: &mut Bits, value: u64, width: u32) {
    debug_assert!(width == 64 || value >> width == 0);
    for k in (0..width).rev() {
        out.push((value >> k) & 1 == 1);
    }
}

/// Appends `value` as exactly `width` bits, most significant first.
pub fn write_big_fixed(out: &mut Bits, value: &BigUint, width: u64) {
    debug_assert!(value.bits() <= width);
    for k in (0..width).rev() {
        out.push(value.bit(k));
    }
}

/// Sequential reader over a bit slice.
pub struct BitReader<'a> {
    bits: &'a BitSlice<u64, Msb0>,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a BitSlice<u64, Msb0>) -> Self {
        BitReader { bits, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn is_exhausted(&self) -> bool {
        self.pos == self.bits.len()
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        let bit = *self
            .bits
            .get(self.pos)
            .ok_or_else(|| Error::Decode(format!("bits exhausted at position {}", self.pos)))?;
        self.pos += 1;
        Ok(bit)
    }

    pub fn read_fixed(&mut self, width: u32) -> Result<u64> {
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.read_bit()? as u64;
        }
        Ok(v)
    }

    pub fn read_big_fixed(&mut self, width: u64) -> Result<BigUint> {
        if (self.remaining() as u64) < width {
            return Err(Error::Decode(format!("need {width} bits, {} left", self.remaining())));
        }
        let mut v = BigUint::default();
        for k in (0..width).rev() {
            if self.read_bit()? {
                v.set_bit(k, true);
            }
        }
        Ok(v)
    }

    pub fn read_self_delimiting(&mut self) -> Result<u64> {
        let v = self.read_self_delimiting_u128()?;
        u64::try_from(v).map_err(|_| Error::Decode("self-delimiting integer exceeds 64 bits".into()))
    }

    pub fn read_self_delimiting_u128(&mut self) -> Result<u128> {
        let mut v = 0u128;
        let mut digits = 0;
        loop {
            match (self.read_bit()?, self.read_bit()?) {
                (false, true) => return Ok(v),
                (a, b) if a == b => {
                    digits += 1;
                    if digits > 128 {
                        return Err(Error::Decode("self-delimiting integer exceeds 128 bits".into()));
                    }
                    v = (v << 1) | a as u128;
                }
                _ => return Err(Error::Decode(format!("invalid digit pair `10` at {}", self.pos - 2))),
            }
        }
    }

    pub fn take(&mut self, len: usize) -> Result<Bits> {
        if self.remaining() < len {
            return Err(Error::Decode(format!("need {len} bits, {} left", self.remaining())));
        }
        let out = self.bits[self.pos..self.pos + len].to_bitvec();
        self.pos += len;
        Ok(out)
    }

    pub fn rest(&mut self) -> Bits {
        let out = self.bits[self.pos..].to_bitvec();
        self.pos = self.bits.len();
        out
    }
}

/// Concatenates parts; every part but the last is preceded by its length in
/// the self-delimiting code.
pub fn frame_parts(parts: &[Bits]) -> Bits {
    let mut out = Bits::new();
    for (i, part) in parts.iter().enumerate() {
        if i + 1 < parts.len() {
            write_self_delimiting(&mut out, part.len() as u64);
        }
        out.extend_from_bitslice(part);
    }
    out
}

/// Inverse of [`frame_parts`] for a known number of parts.
pub fn unframe_parts(bits: &BitSlice<u64, Msb0>, count: usize) -> Result<Vec<Bits>> {
    if count == 0 {
        return if bits.is_empty() {
            Ok(Vec::new())
        } else {
            Err(Error::Decode("bits left over with zero parts".into()))
        };
    }
    let mut reader = BitReader::new(bits);
    let mut parts = Vec::with_capacity(count);
    for _ in 0..count - 1 {
        let len = reader.read_self_delimiting()? as usize;
        parts.push(reader.take(len)?);
    }
    parts.push(reader.rest());
    Ok(parts)
}

/// Bits spent on framing beyond the raw part lengths.
pub fn framing_overhead(part_lengths: &[u64]) -> u64 {
    match part_lengths.split_last() {
        Some((_, init)) => init.iter().map(|&l| self_delimiting_len(l)).sum(),
        None => 0,
    }
}

pub fn bits_from_str(s: &str) -> Result<Bits> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("`{other}` is not a bit"))),
        })
        .collect()
}

pub fn bits_to_string(bits: &BitSlice<u64, Msb0>) -> String {
    bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
}
