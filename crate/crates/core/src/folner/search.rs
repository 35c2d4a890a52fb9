use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, Group, GroupElement, Point};

/// Default bound on the number of candidate subsets examined.
pub const DEFAULT_SEARCH_CAP: u64 = 1 << 32;

/// First subset, in the order where the integer `n` stands for the set of
/// element indices at the 1-bits of `n`, with `|F| > i` and
/// `(i + 1)·|gF \ F| < |F|` for every element `g` of index below `i`.
pub fn modest_search(group: &Group, i: usize, cap: u64) -> Result<FiniteSubset> {
    let shifts = (0..i as u128)
        .map(|g| group.decode(GroupElement(g)))
        .collect::<Result<Vec<Point>>>()?;
    let points: Vec<Point> = (0..64u128).map(|g| group.decode(GroupElement(g))).collect::<Result<_>>()?;
    let mut examined = 0u64;
    for mask in 1u64.. {
        if mask.count_ones() as usize <= i {
            continue;
        }
        examined += 1;
        if examined > cap {
            return Err(Error::CapExceeded(cap));
        }
        let members: FxHashSet<Point> = (0..64).filter(|b| mask >> b & 1 == 1).map(|b| points[b]).collect();
        let size = members.len();
        let mut ok = true;
        for &g in &shifts {
            let mut outside = 0;
            for &f in &members {
                if !members.contains(&group.mul_points(g, f)?) {
                    outside += 1;
                }
            }
            if (i + 1) * outside >= size {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(FiniteSubset::from_elements(
                (0..64).filter(|b| mask >> b & 1 == 1).map(|b| GroupElement(b as u128)),
            ));
        }
        if mask == u64::MAX {
            break;
        }
    }
    Err(Error::CapExceeded(cap))
}
