//! Upper bounds on the description length of a finite set.
//!
//! Four codes are available; [`description_bits`] reports the shortest that
//! applies:
//! - the depth-first connected-set code (identity in the set, connected);
//! - that code compressed with the frequency coder;
//! - a coordinate box: per coordinate, the zigzagged lower corner and the
//!   extent, both self-delimiting;
//! - sorted indices: the count, the first index and every further gap minus
//!   one, all self-delimiting.

use bitvec::prelude::*;

use crate::complexity::bits::{self_delimiting_len_u128, write_self_delimiting_u128, BitReader, Bits};
use crate::complexity::freq::freq_code_len;
use crate::error::{Error, Result};
use crate::group::{unzigzag, zigzag, FiniteSubset, Group, GroupElement, Point};
use crate::setcodec::{encode_connected, is_rooted_connected};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetCode {
    Connected,
    ConnectedFreq,
    CoordinateBox,
    SortedDelta,
}

/// Lower corner and extents when `set` is exactly a coordinate box.
fn as_box(group: &Group, set: &FiniteSubset) -> Result<Option<(Point, [i64; 3])>> {
    let Some(first) = set.first() else { return Ok(None) };
    let mut lo = group.decode(first)?.0;
    let mut hi = lo;
    for g in set.iter() {
        let p = group.decode(g)?.0;
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let ext = [hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1];
    let volume = ext.iter().try_fold(1u128, |acc, &e| acc.checked_mul(e as u128));
    // all points lie in the bounding box, so equal counts mean equal sets
    Ok((volume == Some(set.len() as u128)).then_some((Point(lo), ext)))
}

pub fn encode_box(group: &Group, set: &FiniteSubset) -> Result<Option<Bits>> {
    let Some((lo, ext)) = as_box(group, set)? else { return Ok(None) };
    let mut out = Bits::new();
    for k in 0..group.dim() {
        write_self_delimiting_u128(&mut out, zigzag(lo.0[k]) as u128);
        write_self_delimiting_u128(&mut out, ext[k] as u128);
    }
    Ok(Some(out))
}

pub fn decode_box(group: &Group, bits: &BitSlice<u64, Msb0>) -> Result<FiniteSubset> {
    let mut reader = BitReader::new(bits);
    let mut lo = [0i64; 3];
    let mut ext = [1i64; 3];
    for k in 0..group.dim() {
        lo[k] = unzigzag(reader.read_self_delimiting()?);
        ext[k] = reader.read_self_delimiting()? as i64;
        if ext[k] == 0 {
            return Err(Error::Decode("empty box side".into()));
        }
    }
    if !reader.is_exhausted() {
        return Err(Error::Decode("bits left after box".into()));
    }
    let mut pts = Vec::new();
    for a in 0..ext[0] {
        for b in 0..ext[1] {
            for c in 0..ext[2] {
                pts.push(Point([lo[0] + a, lo[1] + b, lo[2] + c]));
            }
        }
    }
    group.subset_from_points(pts)
}

pub fn delta_code_len(set: &FiniteSubset) -> u64 {
    let mut total = self_delimiting_len_u128(set.len() as u128);
    let mut prev: Option<u128> = None;
    for g in set.iter() {
        total += self_delimiting_len_u128(match prev {
            None => g.0,
            Some(p) => g.0 - p - 1,
        });
        prev = Some(g.0);
    }
    total
}

pub fn encode_delta(set: &FiniteSubset) -> Bits {
    let mut out = Bits::new();
    write_self_delimiting_u128(&mut out, set.len() as u128);
    let mut prev: Option<u128> = None;
    for g in set.iter() {
        write_self_delimiting_u128(&mut out, match prev {
            None => g.0,
            Some(p) => g.0 - p - 1,
        });
        prev = Some(g.0);
    }
    out
}

pub fn decode_delta(bits: &BitSlice<u64, Msb0>) -> Result<FiniteSubset> {
    let mut reader = BitReader::new(bits);
    let count = reader.read_self_delimiting_u128()?;
    let mut elems = Vec::new();
    let mut prev: Option<u128> = None;
    for _ in 0..count {
        let gap = reader.read_self_delimiting_u128()?;
        let g = match prev {
            None => gap,
            Some(p) => p
                .checked_add(gap)
                .and_then(|x| x.checked_add(1))
                .ok_or_else(|| Error::Decode("index overflow".into()))?,
        };
        elems.push(GroupElement(g));
        prev = Some(g);
    }
    if !reader.is_exhausted() {
        return Err(Error::Decode("bits left after indices".into()));
    }
    FiniteSubset::from_sorted(elems)
}

/// Bit length of every code that applies to `set`.
pub fn set_code_lengths(group: &Group, set: &FiniteSubset) -> Result<Vec<(SetCode, u64)>> {
    let mut out = Vec::new();
    if is_rooted_connected(group, set)? {
        let bits = encode_connected(group, set)?;
        let ones = bits.count_ones() as u64;
        out.push((SetCode::Connected, bits.len() as u64));
        out.push((SetCode::ConnectedFreq, freq_code_len(&[bits.len() as u64 - ones, ones])));
    }
    if let Some(bits) = encode_box(group, set)? {
        out.push((SetCode::CoordinateBox, bits.len() as u64));
    }
    out.push((SetCode::SortedDelta, delta_code_len(set)));
    Ok(out)
}

/// Length of the shortest applicable code.
pub fn description_bits(group: &Group, set: &FiniteSubset) -> Result<u64> {
    Ok(set_code_lengths(group, set)?.into_iter().map(|(_, len)| len).min().expect("the delta code always applies"))
}

/// `Σ 2^(−eps·|F_i|)`.
pub fn series_tail(sizes: &[u64], eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::Domain("eps must be positive".into()));
    }
    Ok(sizes.iter().map(|&s| (-eps * s as f64).exp2()).sum())
}
