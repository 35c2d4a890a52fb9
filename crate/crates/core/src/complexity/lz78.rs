//! LZ78 incremental parsing.
//!
//! Layout: the word length `n` in the self-delimiting code, then one record
//! per phrase. Phrase `k` (counting from 1) stores the index of its prefix
//! phrase (0 is the empty phrase) in `ceil(log2 k)` bits followed by its last
//! letter in `ceil(log2 |A|)` bits. A trailing phrase that repeats an earlier
//! one has no letter; the decoder recognises it from the remaining length.

use bitvec::prelude::*;
use rustc_hash::FxHashMap;

use super::bits::{self_delimiting_len, write_fixed, write_self_delimiting, BitReader, Bits};
use crate::error::{Error, Result};
use crate::Symbol;

fn ceil_log2(k: u64) -> u32 {
    if k <= 1 {
        0
    } else {
        64 - (k - 1).leading_zeros()
    }
}

/// Phrase list as (prefix phrase, optional final letter).
fn parse(word: &[Symbol]) -> Vec<(u32, Option<Symbol>)> {
    let mut trie: FxHashMap<(u32, Symbol), u32> = FxHashMap::default();
    let mut phrases = Vec::new();
    let mut node = 0u32;
    for &a in word {
        match trie.get(&(node, a)) {
            Some(&next) => node = next,
            None => {
                phrases.push((node, Some(a)));
                trie.insert((node, a), phrases.len() as u32);
                node = 0;
            }
        }
    }
    if node != 0 {
        phrases.push((node, None));
    }
    phrases
}

fn check_alphabet(word: &[Symbol], alphabet_size: usize) -> Result<()> {
    match word.iter().find(|&&a| a as usize >= alphabet_size) {
        Some(a) => Err(Error::Domain(format!("symbol {a} outside alphabet of size {alphabet_size}"))),
        None => Ok(()),
    }
}

pub fn lz78_encode(word: &[Symbol], alphabet_size: usize) -> Result<Bits> {
    check_alphabet(word, alphabet_size)?;
    let literal_width = ceil_log2(alphabet_size as u64);
    let mut out = Bits::new();
    write_self_delimiting(&mut out, word.len() as u64);
    for (k, (prefix, literal)) in parse(word).into_iter().enumerate() {
        write_fixed(&mut out, prefix as u64, ceil_log2(k as u64 + 1));
        if let Some(a) = literal {
            write_fixed(&mut out, a as u64, literal_width);
        }
    }
    Ok(out)
}

/// Length of [`lz78_encode`]'s output without materialising it.
pub fn lz78_code_len(word: &[Symbol], alphabet_size: usize) -> Result<u64> {
    check_alphabet(word, alphabet_size)?;
    let literal_width = ceil_log2(alphabet_size as u64) as u64;
    let phrases = parse(word);
    let refs: u64 = (1..=phrases.len() as u64).map(|k| ceil_log2(k) as u64).sum();
    let literals = phrases.iter().filter(|p| p.1.is_some()).count() as u64 * literal_width;
    Ok(self_delimiting_len(word.len() as u64) + refs + literals)
}

pub fn lz78_decode(bits: &BitSlice<u64, Msb0>, alphabet_size: usize) -> Result<Vec<Symbol>> {
    let mut reader = BitReader::new(bits);
    let n = reader.read_self_delimiting()? as usize;
    let literal_width = ceil_log2(alphabet_size as u64);
    let mut out: Vec<Symbol> = Vec::with_capacity(n);
    // (start in output, length) per phrase; phrase 0 is empty.
    let mut spans: Vec<(usize, usize)> = vec![(0, 0)];
    while out.len() < n {
        let k = spans.len() as u64;
        let prefix = reader.read_fixed(ceil_log2(k))? as usize;
        let &(start, len) = spans
            .get(prefix)
            .ok_or_else(|| Error::Decode(format!("phrase {k} refers to unknown phrase {prefix}")))?;
        let begin = out.len();
        if out.len() + len > n {
            return Err(Error::Decode("phrase overruns declared length".into()));
        }
        out.extend_from_within(start..start + len);
        if out.len() == n {
            if prefix == 0 {
                return Err(Error::Decode("empty trailing phrase".into()));
            }
            break;
        }
        let a = reader.read_fixed(literal_width)?;
        if a as usize >= alphabet_size {
            return Err(Error::Decode(format!("literal {a} outside alphabet")));
        }
        out.push(a as Symbol);
        spans.push((begin, len + 1));
    }
    if !reader.is_exhausted() {
        return Err(Error::Decode(format!("{} bits left after last phrase", reader.remaining())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_symbol_is_one_phrase() {
        assert_eq!(parse(&[1]), vec![(0, Some(1))]);
        let bits = lz78_encode(&[1], 2).unwrap();
        assert_eq!(lz78_decode(&bits, 2).unwrap(), vec![1]);
    }

    #[test]
    fn parse_trace() {
        // a | b | aa | ab | a
        let w = [0, 1, 0, 0, 0, 1, 0];
        assert_eq!(parse(&w), vec![(0, Some(0)), (0, Some(1)), (1, Some(0)), (1, Some(1)), (1, None)]);
    }

    #[test]
    fn constant_word_is_short() {
        let w = vec![0u8; 4096];
        let bits = lz78_encode(&w, 2).unwrap();
        assert!(bits.len() < 1500, "{}", bits.len());
        assert_eq!(lz78_decode(&bits, 2).unwrap(), w);
    }

    #[test]
    fn rejects_trailing_garbage() {
        let mut bits = lz78_encode(&[0, 1, 1], 2).unwrap();
        bits.push(true);
        assert!(lz78_decode(&bits, 2).is_err());
    }

    proptest! {
        #[test]
        fn roundtrip(k in 1usize..6, w in proptest::collection::vec(0u8..6, 0..300)) {
            let w: Vec<Symbol> = w.into_iter().map(|a| a % k as u8).collect();
            let bits = lz78_encode(&w, k).unwrap();
            prop_assert_eq!(bits.len() as u64, lz78_code_len(&w, k).unwrap());
            prop_assert_eq!(lz78_decode(&bits, k).unwrap(), w);
        }
    }
}
