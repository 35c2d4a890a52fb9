//! Enumerative two-part code: the letter counts of a word, then the
//! lexicographic rank of the word inside its type class.
//!
//! The rank is written in exactly `bitlen(M - 1)` bits where `M` is the
//! multinomial coefficient of the counts, so the code length depends only on
//! the counts.
//!
//! Ranking a long word needs one big division. Writing `d_j` for the number of
//! occurrences of `w_j` in the suffix `w[j..]`, `L_j` for the number of
//! suffix letters smaller than `w_j` and `m_j = n - j`,
//!
//! ```text
//! rank · Π d_j = Σ_j L_j · Π_{t<j} d_t · Π_{t>j} m_t
//! ```
//!
//! The right side is built by binary splitting modulo `2^(B+e)`, where
//! `B = bitlen(M - 1)` and `e` is the 2-adic valuation of `Π d_j`. Since the
//! division is exact, the rank is recovered modulo `2^B` by multiplying with
//! the inverse of the odd part of `Π d_j`.

use bitvec::prelude::*;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::bits::{bit_length, write_big_fixed, write_self_delimiting, BitReader, Bits};
use crate::error::{Error, Result};
use crate::Symbol;

pub fn letter_counts(word: &[Symbol], alphabet_size: usize) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; alphabet_size];
    for &a in word {
        let slot = counts
            .get_mut(a as usize)
            .ok_or_else(|| Error::Domain(format!("symbol {a} outside alphabet of size {alphabet_size}")))?;
        *slot += 1;
    }
    Ok(counts)
}

fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

fn factorial_valuation(m: u64, p: u64) -> u64 {
    let mut v = 0;
    let mut q = m / p;
    while q > 0 {
        v += q;
        q /= p;
    }
    v
}

fn product_tree(mut factors: Vec<BigUint>) -> BigUint {
    if factors.is_empty() {
        return BigUint::one();
    }
    while factors.len() > 1 {
        factors = factors
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => a * b,
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    factors.pop().unwrap()
}

/// Number of words with the given letter counts.
pub fn type_class_size(counts: &[u64]) -> BigUint {
    let n: u64 = counts.iter().sum();
    let factors = primes_up_to(n)
        .into_iter()
        .filter_map(|p| {
            let e = factorial_valuation(n, p) - counts.iter().map(|&c| factorial_valuation(c, p)).sum::<u64>();
            (e > 0).then(|| BigUint::from(p).pow(e as u32))
        })
        .collect();
    product_tree(factors)
}

/// Width of the rank field for a type class of size `size`.
pub fn rank_width(size: &BigUint) -> u64 {
    if size.is_zero() {
        0
    } else {
        (size - 1u32).bits()
    }
}

struct Split {
    pd: BigUint,
    pm: BigUint,
    s: BigUint,
}

fn truncate(x: &mut BigUint, modulus_bits: u64, mask: &BigUint) {
    if x.bits() > modulus_bits {
        *x &= mask;
    }
}

fn split(d: &[u64], m: &[u64], l: &[u64], need_pd: bool, need_pm: bool, bits: u64, mask: &BigUint) -> Split {
    const LEAF: usize = 32;
    let mut out = if d.len() <= LEAF {
        let mut acc = Split { pd: BigUint::one(), pm: BigUint::one(), s: BigUint::zero() };
        for j in 0..d.len() {
            acc.s = &acc.s * m[j] + &acc.pd * l[j];
            acc.pd *= d[j];
            if need_pm {
                acc.pm *= m[j];
            }
        }
        acc
    } else {
        // The left half only contributes its `pd`, the right half its `pm`.
        let mid = d.len() / 2;
        let (left, right) = rayon::join(
            || split(&d[..mid], &m[..mid], &l[..mid], true, need_pm, bits, mask),
            || split(&d[mid..], &m[mid..], &l[mid..], need_pd, true, bits, mask),
        );
        let s = &left.s * &right.pm + &left.pd * &right.s;
        Split {
            s,
            pd: if need_pd { left.pd * right.pd } else { BigUint::one() },
            pm: if need_pm { left.pm * right.pm } else { BigUint::one() },
        }
    };
    truncate(&mut out.s, bits, mask);
    truncate(&mut out.pd, bits, mask);
    truncate(&mut out.pm, bits, mask);
    out
}

/// Inverse of an odd number modulo `2^bits` by Newton iteration.
fn inverse_mod_pow2(a: &BigUint, bits: u64) -> BigUint {
    debug_assert!(a.bit(0));
    let mut x = BigUint::one();
    let mut precision = 1u64;
    while precision < bits {
        precision = (precision * 2).min(bits);
        let mask = (BigUint::one() << precision) - 1u32;
        let ax = ((a & &mask) * &x) & &mask;
        // 2 - ax modulo 2^precision
        let correction = ((&mask ^ ax) + 3u32) & &mask;
        x = (x * correction) & &mask;
    }
    x
}

/// Lexicographic rank of `word` among the words sharing its letter counts.
pub fn type_class_rank(word: &[Symbol], counts: &[u64]) -> BigUint {
    let width = rank_width(&type_class_size(counts));
    rank_with_width(word, counts.len(), width)
}

fn rank_with_width(word: &[Symbol], alphabet_size: usize, width: u64) -> BigUint {
    if width == 0 {
        return BigUint::zero();
    }
    let n = word.len();
    let mut suffix = vec![0u64; alphabet_size];
    let mut d = vec![0u64; n];
    let mut m = vec![0u64; n];
    let mut l = vec![0u64; n];
    for j in (0..n).rev() {
        let a = word[j] as usize;
        suffix[a] += 1;
        d[j] = suffix[a];
        m[j] = (n - j) as u64;
        l[j] = suffix[..a].iter().sum();
    }
    let twos: u64 = d.iter().map(|x| x.trailing_zeros() as u64).sum();
    let modulus_bits = width + twos;
    let mask = (BigUint::one() << modulus_bits) - 1u32;
    let total = split(&d, &m, &l, true, false, modulus_bits, &mask);
    let low_mask = (BigUint::one() << width) - 1u32;
    let odd = (&total.pd >> twos) & &low_mask;
    let scaled = (&total.s >> twos) & &low_mask;
    (scaled * inverse_mod_pow2(&odd, width)) & low_mask
}

/// Word with the given counts and lexicographic rank.
pub fn type_class_unrank(rank: &BigUint, counts: &[u64]) -> Result<Vec<Symbol>> {
    let mut remaining = counts.to_vec();
    let mut size = type_class_size(counts);
    if rank >= &size {
        return Err(Error::Decode("rank exceeds type class size".into()));
    }
    let n: u64 = counts.iter().sum();
    let mut rank = rank.clone();
    let mut word = Vec::with_capacity(n as usize);
    for left in (1..=n).rev() {
        for (a, c) in remaining.iter_mut().enumerate() {
            if *c == 0 {
                continue;
            }
            let block = &size * *c / left;
            if rank < block {
                word.push(a as Symbol);
                *c -= 1;
                size = block;
                break;
            }
            rank -= block;
        }
    }
    Ok(word)
}

/// Code length in bits for a word with these counts.
pub fn freq_code_len(counts: &[u64]) -> u64 {
    let header: u64 = counts.iter().map(|&c| 2 * bit_length(c) as u64 + 2).sum();
    header + rank_width(&type_class_size(counts))
}

/// Closed-form ceiling `n·H(p(w)) + |A|·(2·log2(n+1) + 2) + 2` on the code length.
pub fn freq_bound(counts: &[u64]) -> f64 {
    let n: u64 = counts.iter().sum();
    let nh: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as f64 * (n as f64 / c as f64).log2())
        .sum();
    nh + counts.len() as f64 * (2.0 * ((n + 1) as f64).log2() + 2.0) + 2.0
}

pub fn freq_encode(word: &[Symbol], alphabet_size: usize) -> Result<Bits> {
    let counts = letter_counts(word, alphabet_size)?;
    let mut out = Bits::new();
    for &c in &counts {
        write_self_delimiting(&mut out, c);
    }
    let width = rank_width(&type_class_size(&counts));
    let rank = rank_with_width(word, alphabet_size, width);
    write_big_fixed(&mut out, &rank, width);
    Ok(out)
}

pub fn freq_decode(bits: &BitSlice<u64, Msb0>, alphabet_size: usize) -> Result<Vec<Symbol>> {
    let mut reader = BitReader::new(bits);
    let mut counts = Vec::with_capacity(alphabet_size);
    for _ in 0..alphabet_size {
        counts.push(reader.read_self_delimiting()?);
    }
    let width = rank_width(&type_class_size(&counts));
    let rank = reader.read_big_fixed(width)?;
    if !reader.is_exhausted() {
        return Err(Error::Decode(format!("{} bits left after rank", reader.remaining())));
    }
    type_class_unrank(&rank, &counts)
}
