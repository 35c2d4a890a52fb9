//! Depth-first code for a Cayley-connected finite set containing the
//! identity.
//!
//! The walk starts at the identity and reaches neighbours `s·g` in generator
//! order. An unvisited vertex inside the set writes `1` and is expanded; one
//! outside writes `0`; revisits write nothing. The code therefore has
//! `|T|` ones and `|ST \ T|` zeros.

use indexmap::IndexSet;
use rustc_hash::{FxBuildHasher, FxHashSet};

use crate::complexity::bits::{BitReader, Bits};
use crate::error::{Error, Result};
use crate::group::{FiniteSubset, Group, GroupElement, Point};
use crate::stochastic::SplitMix64;

fn point_set(group: &Group, set: &FiniteSubset) -> Result<FxHashSet<Point>> {
    set.iter().map(|g| group.decode(g)).collect()
}

/// True when `T` contains the identity and is connected in the Cayley graph.
pub fn is_rooted_connected(group: &Group, set: &FiniteSubset) -> Result<bool> {
    if !set.contains(GroupElement::IDENTITY) {
        return Ok(false);
    }
    let members = point_set(group, set)?;
    let mut seen = FxHashSet::default();
    seen.insert(Point::ORIGIN);
    let mut stack = vec![Point::ORIGIN];
    while let Some(p) = stack.pop() {
        for q in group.neighbor_points(p)? {
            if members.contains(&q) && seen.insert(q) {
                stack.push(q);
            }
        }
    }
    Ok(seen.len() == members.len())
}

pub fn encode_connected(group: &Group, set: &FiniteSubset) -> Result<Bits> {
    if !set.contains(GroupElement::IDENTITY) {
        return Err(Error::Encoding("the set does not contain the identity".into()));
    }
    if !is_rooted_connected(group, set)? {
        return Err(Error::Encoding("the set is not connected in the Cayley graph".into()));
    }
    let members = point_set(group, set)?;
    let mut visited = FxHashSet::default();
    let mut out = Bits::new();
    let mut stack = vec![Point::ORIGIN];
    while let Some(p) = stack.pop() {
        if !visited.insert(p) {
            continue;
        }
        if members.contains(&p) {
            out.push(true);
            // reversed so the first generator is expanded first
            stack.extend(group.neighbor_points(p)?.into_iter().rev());
        } else {
            out.push(false);
        }
    }
    Ok(out)
}

pub fn decode(group: &Group, bits: &Bits) -> Result<FiniteSubset> {
    let mut reader = BitReader::new(bits);
    let mut visited = FxHashSet::default();
    let mut members = Vec::new();
    let mut stack = vec![Point::ORIGIN];
    while let Some(p) = stack.pop() {
        if !visited.insert(p) {
            continue;
        }
        if reader.read_bit()? {
            members.push(p);
            stack.extend(group.neighbor_points(p)?.into_iter().rev());
        } else if members.is_empty() {
            return Err(Error::Decode("first bit must be 1".into()));
        }
    }
    if !reader.is_exhausted() {
        return Err(Error::Decode(format!("{} bits left after the walk", reader.remaining())));
    }
    group.subset_from_points(members)
}

/// A connected set of `size` elements containing the identity, grown by
/// adding a uniformly chosen boundary element at each step.
pub fn random_connected_subset(group: &Group, size: usize, seed: u64) -> Result<FiniteSubset> {
    if size == 0 {
        return Err(Error::Domain("size must be at least 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let mut members = FxHashSet::default();
    members.insert(Point::ORIGIN);
    let mut frontier: IndexSet<Point, FxBuildHasher> = IndexSet::default();
    frontier.extend(group.neighbor_points(Point::ORIGIN)?);
    let mut order = vec![Point::ORIGIN];
    while order.len() < size {
        let pick = rng.below(frontier.len() as u64) as usize;
        let p = frontier.swap_remove_index(pick).expect("frontier is nonempty in an infinite group");
        members.insert(p);
        order.push(p);
        for q in group.neighbor_points(p)? {
            if !members.contains(&q) {
                frontier.insert(q);
            }
        }
    }
    group.subset_from_points(order)
}
