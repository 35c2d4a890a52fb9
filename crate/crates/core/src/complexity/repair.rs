//! Describing a word relative to a reference word of the same length: the
//! positions where they differ (as a frequency-coded bitmap) and the letters
//! of the target at those positions (as one base-`|A|` number).

use bitvec::prelude::*;
use num_bigint::BigUint;
use num_traits::Zero;

use super::bits::{bit_length, frame_parts, unframe_parts, write_big_fixed, BitReader, Bits};
use super::freq::{freq_bound, freq_decode, freq_encode};
use crate::error::{Error, Result};
use crate::Symbol;

fn pack_digits(digits: &[Symbol], base: u32) -> BigUint {
    match digits.len() {
        0 => BigUint::zero(),
        1 => BigUint::from(digits[0]),
        len => {
            let mid = len / 2;
            let hi = pack_digits(&digits[..mid], base);
            let lo = pack_digits(&digits[mid..], base);
            hi * BigUint::from(base).pow((len - mid) as u32) + lo
        }
    }
}

fn unpack_digits(value: &BigUint, base: u32, len: usize, out: &mut Vec<Symbol>) {
    match len {
        0 => {}
        1 => out.push(value.iter_u32_digits().next().unwrap_or(0) as Symbol),
        _ => {
            let mid = len / 2;
            let scale = BigUint::from(base).pow((len - mid) as u32);
            unpack_digits(&(value / &scale), base, mid, out);
            unpack_digits(&(value % &scale), base, len - mid, out);
        }
    }
}

fn substitute_width(alphabet_size: usize, count: usize) -> u64 {
    let space = BigUint::from(alphabet_size).pow(count as u32);
    (space - 1u32).bits()
}

pub fn repair_encode(base: &[Symbol], target: &[Symbol], alphabet_size: usize) -> Result<Bits> {
    if base.len() != target.len() {
        return Err(Error::Domain(format!("length mismatch: {} vs {}", base.len(), target.len())));
    }
    if let Some(a) = base.iter().chain(target).find(|&&a| a as usize >= alphabet_size) {
        return Err(Error::Domain(format!("symbol {a} outside alphabet of size {alphabet_size}")));
    }
    let bitmap: Vec<Symbol> = base.iter().zip(target).map(|(a, b)| (a != b) as Symbol).collect();
    let substitutes: Vec<Symbol> = base.iter().zip(target).filter(|(a, b)| a != b).map(|(_, &b)| b).collect();
    let mut letters = Bits::new();
    write_big_fixed(
        &mut letters,
        &pack_digits(&substitutes, alphabet_size as u32),
        substitute_width(alphabet_size, substitutes.len()),
    );
    Ok(frame_parts(&[freq_encode(&bitmap, 2)?, letters]))
}

pub fn repair_decode(base: &[Symbol], bits: &BitSlice<u64, Msb0>, alphabet_size: usize) -> Result<Vec<Symbol>> {
    let parts = unframe_parts(bits, 2)?;
    let bitmap = freq_decode(&parts[0], 2)?;
    if bitmap.len() != base.len() {
        return Err(Error::Decode(format!("bitmap covers {} positions, base has {}", bitmap.len(), base.len())));
    }
    let flips = bitmap.iter().filter(|&&b| b == 1).count();
    let width = substitute_width(alphabet_size, flips);
    let mut reader = BitReader::new(&parts[1]);
    let value = reader.read_big_fixed(width)?;
    if !reader.is_exhausted() {
        return Err(Error::Decode("bits left after substitute letters".into()));
    }
    let mut substitutes = Vec::with_capacity(flips);
    unpack_digits(&value, alphabet_size as u32, flips, &mut substitutes);
    let mut substitutes = substitutes.into_iter();
    Ok(base
        .iter()
        .zip(&bitmap)
        .map(|(&a, &flip)| if flip == 1 { substitutes.next().unwrap() } else { a })
        .collect())
}

/// Closed-form ceiling on the [`repair_encode`] length for `flips`
/// differences among `n` positions.
///
/// The bitmap part is bounded by the frequency-coder ceiling `U`; the letters
/// take at most `flips·log2|A| + 1` bits; the frame costs
/// `2·bitlen(floor(U)) + 2`.
pub fn repair_bound(n: u64, flips: u64, alphabet_size: usize) -> f64 {
    let bitmap = freq_bound(&[n - flips, flips]);
    let letters = flips as f64 * (alphabet_size as f64).log2() + 1.0;
    let frame = 2.0 * bit_length(bitmap.floor() as u64) as f64 + 2.0;
    bitmap + letters + frame
}

/// `n·(H(δ) + δ·log2|A|)`, the leading term of the repair cost.
pub fn repair_rate_term(n: u64, flips: u64, alphabet_size: usize) -> f64 {
    let nh: f64 = [flips, n - flips]
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as f64 * (n as f64 / c as f64).log2())
        .sum();
    nh + flips as f64 * (alphabet_size as f64).log2()
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identical_words_are_header_only() {
        let w = vec![1u8; 500];
        let bits = repair_encode(&w, &w, 2).unwrap();
        assert!(bits.len() < 40, "{}", bits.len());
        assert_eq!(repair_decode(&w, &bits, 2).unwrap(), w);
    }

    #[test]
    fn fifty_flips_in_a_thousand() {
        let base: Vec<Symbol> = (0..1000).map(|i| (i * 7 % 3 == 0) as Symbol).collect();
        let mut target = base.clone();
        for i in (0..1000).step_by(20) {
            target[i] ^= 1;
        }
        let bits = repair_encode(&base, &target, 2).unwrap();
        assert!((bits.len() as f64) <= 1000.0 * (0.28640 + 0.05) + 120.0);
        assert!((bits.len() as f64) <= repair_bound(1000, 50, 2));
        assert_eq!(repair_decode(&base, &bits, 2).unwrap(), target);
    }

    #[test]
    fn full_flip_costs_about_n() {
        let base = vec![0u8; 1000];
        let target = vec![1u8; 1000];
        let bits = repair_encode(&base, &target, 2).unwrap();
        assert!(bits.len() >= 1000 && bits.len() < 1050, "{}", bits.len());
        assert_eq!(repair_decode(&base, &bits, 2).unwrap(), target);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(repair_encode(&[0, 1], &[0], 2).is_err());
    }

    proptest! {
        #[test]
        fn roundtrip_within_bound(k in 1usize..5, pairs in proptest::collection::vec((0u8..5, 0u8..5), 0..200)) {
            let base: Vec<Symbol> = pairs.iter().map(|p| p.0 % k as u8).collect();
            let target: Vec<Symbol> = pairs.iter().map(|p| p.1 % k as u8).collect();
            let bits = repair_encode(&base, &target, k).unwrap();
            let flips = base.iter().zip(&target).filter(|(a, b)| a != b).count() as u64;
            prop_assert!((bits.len() as f64) <= repair_bound(base.len() as u64, flips, k) + 1e-9);
            prop_assert_eq!(repair_decode(&base, &bits, k).unwrap(), target);
        }
    }
}
