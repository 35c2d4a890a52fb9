//! Greedy quasi-tilings of Følner sets by translates `F_j·c` of earlier
//! members of the sequence.
//!
//! A set `F` is `(K, δ)`-invariant when at least `(1 − δ)|F|` of its
//! elements `c` satisfy `K·c ⊆ F`. The planner counts such elements directly
//! when that is cheap. For large sets it uses a geometric certificate
//! instead: if every tile element has word length at most `r` (measured by a
//! breadth-first search inside the tile), then `K·c ⊆ F` whenever `c` lies at
//! Cayley distance more than `r` from the complement of `F`.

use std::collections::VecDeque;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::folner::FolnerSequence;
use crate::group::{FiniteSubset, Group, GroupElement, Point};
use crate::Rational;

/// Tile scales `j_1 < … < j_k` into a sequence, and the index `N` beyond
/// which the sequence's sets are covered by the plan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingPlan {
    pub scales: Vec<usize>,
    pub threshold: usize,
    pub eps: Rational,
}

impl TilingPlan {
    /// A plan with hand-picked scales; the threshold is left at 0.
    pub fn manual(scales: Vec<usize>, eps: Rational) -> Result<Self> {
        if scales.is_empty() || scales.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Planning("scales must be nonempty and increasing".into()));
        }
        check_eps(eps)?;
        Ok(TilingPlan { scales, threshold: 0, eps })
    }
}

#[derive(Clone, Debug)]
pub struct PlanOptions {
    /// First tile scale; defaults to the first index with `|F| ≥ 2`.
    pub min_scale: Option<usize>,
    /// Scale selection stops before a tile exceeds this many elements.
    pub max_tile_size: u64,
    /// The threshold search gives up past sets of this size.
    pub max_set_size: u64,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions { min_scale: None, max_tile_size: 256, max_set_size: 1 << 22 }
    }
}

fn check_eps(eps: Rational) -> Result<()> {
    if eps <= Ratio::zero() || eps >= Ratio::from_integer(1) {
        return Err(Error::Domain(format!("eps = {eps} must lie strictly between 0 and 1")));
    }
    Ok(())
}

/// `ceil(log ε / log(1 − ε/2))`, the number of scales the covering argument
/// asks for.
pub fn scale_count_bound(eps: Rational) -> Result<usize> {
    check_eps(eps)?;
    let e = eps.to_f64().expect("finite");
    let k = (e.ln() / (1.0 - e / 2.0).ln()).ceil();
    Ok(k.max(1.0) as usize)
}

/// Largest word length of a tile element, measured inside the tile.
fn tile_radius(group: &Group, tile: &[Point]) -> Result<usize> {
    let members: FxHashSet<Point> = tile.iter().copied().collect();
    if !members.contains(&Point::ORIGIN) {
        return Err(Error::Planning("tile does not contain the identity".into()));
    }
    let mut dist = FxHashMap::default();
    dist.insert(Point::ORIGIN, 0usize);
    let mut queue = VecDeque::from([Point::ORIGIN]);
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        for q in group.neighbor_points(p)? {
            if members.contains(&q) && !dist.contains_key(&q) {
                dist.insert(q, d + 1);
                queue.push_back(q);
            }
        }
    }
    if dist.len() != members.len() {
        return Err(Error::Planning("tile is not connected".into()));
    }
    Ok(dist.values().copied().max().unwrap_or(0))
}

/// Number of elements of `set` at Cayley distance greater than `r` from its
/// complement.
fn deep_count(group: &Group, set: &[Point], r: usize) -> Result<usize> {
    let members: FxHashSet<Point> = set.iter().copied().collect();
    let mut dist: FxHashMap<Point, usize> = FxHashMap::default();
    let mut queue = VecDeque::new();
    for &p in set {
        for q in group.neighbor_points(p)? {
            if !members.contains(&q) {
                dist.insert(p, 1);
                queue.push_back(p);
                break;
            }
        }
    }
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        if d > r {
            break;
        }
        for q in group.neighbor_points(p)? {
            if members.contains(&q) && !dist.contains_key(&q) {
                dist.insert(q, d + 1);
                queue.push_back(q);
            }
        }
    }
    Ok(set.iter().filter(|p| dist.get(p).is_none_or(|&d| d > r)).count())
}

/// Above this many products `|F|·|K|` the interior is certified by distance
/// instead of counted.
const EXACT_INTERIOR_LIMIT: u64 = 1 << 26;

/// Number of `c ∈ F` with `K·c ⊆ F`.
fn interior_count(group: &Group, set: &[Point], tile: &[Point]) -> Result<usize> {
    let members: FxHashSet<Point> = set.iter().copied().collect();
    let mut count = 0;
    'centers: for &c in set {
        for &k in tile {
            if !members.contains(&group.mul_points(k, c)?) {
                continue 'centers;
            }
        }
        count += 1;
    }
    Ok(count)
}

struct Tile {
    points: Vec<Point>,
    radius: usize,
}

impl Tile {
    fn new(group: &Group, points: Vec<Point>) -> Result<Self> {
        let radius = tile_radius(group, &points)?;
        Ok(Tile { points, radius })
    }
}

/// Whether at least `(1 − δ)|F|` elements `c` of `F` satisfy `K·c ⊆ F`.
/// Counted exactly for moderate sizes, otherwise certified by distance.
fn invariant_enough(group: &Group, set: &[Point], tile: &Tile, delta: Rational) -> Result<bool> {
    let work = set.len() as u64 * tile.points.len() as u64;
    let good = if work <= EXACT_INTERIOR_LIMIT {
        interior_count(group, set, &tile.points)?
    } else {
        deep_count(group, set, tile.radius)?
    };
    Ok(Ratio::from_integer(good as i128) >= (Ratio::from_integer(1) - delta) * Ratio::from_integer(set.len() as i128))
}

pub fn plan(seq: &FolnerSequence, eps: Rational, options: &PlanOptions) -> Result<TilingPlan> {
    let k_bound = scale_count_bound(eps)?;
    let group = seq.group();
    let quarter = eps / Ratio::from_integer(4);
    let in_range = |i: usize| seq.last_index().is_none_or(|last| i <= last);

    let mut j = match options.min_scale {
        Some(j) => j,
        None => {
            let mut j = seq.first_index();
            while in_range(j) && seq.size(j)? < 2 {
                j += 1;
            }
            j
        }
    };
    if !in_range(j) || seq.size(j)? > options.max_tile_size {
        return Err(Error::Planning("no tile of admissible size".into()));
    }
    let mut scales = vec![j];
    let mut tile = Tile::new(group, seq.points(j)?)?;
    'scales: while scales.len() < k_bound {
        let mut i = j + 1;
        loop {
            if !in_range(i) || seq.size(i)? > options.max_tile_size {
                break 'scales;
            }
            if invariant_enough(group, &seq.points(i)?, &tile, quarter)? {
                break;
            }
            i += 1;
        }
        j = i;
        scales.push(j);
        tile = Tile::new(group, seq.points(j)?)?;
    }

    let holds = |i: usize| -> Result<Option<bool>> {
        if !in_range(i) || seq.size(i)? > options.max_set_size {
            return Ok(None);
        }
        Ok(Some(invariant_enough(group, &seq.points(i)?, &tile, quarter)?))
    };
    let give_up = || {
        Error::Planning(format!(
            "no set up to {} elements is ({eps})/4-invariant under the largest tile",
            options.max_set_size
        ))
    };
    let first = if seq.last_index().is_some() {
        // finite lists are scanned one by one
        let mut i = j + 1;
        loop {
            match holds(i)? {
                None => return Err(give_up()),
                Some(true) => break i,
                Some(false) => i += 1,
            }
        }
    } else {
        // the built-in families grow monotonically: gallop, then bisect
        let mut lo = j;
        let mut step = 1;
        let mut hi = loop {
            let i = lo + step;
            match holds(i)? {
                None => return Err(give_up()),
                Some(true) => break i,
                Some(false) => {
                    lo = i;
                    step *= 2;
                }
            }
        };
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if holds(mid)?.ok_or_else(give_up)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    Ok(TilingPlan { scales, threshold: first - 1, eps })
}

/// Centre sets `R_s`, one per plan scale and in the plan's order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub centers: Vec<FiniteSubset>,
}

/// Greedy construction, largest scale first: a centre `c` is taken when
/// `F_j·c ⊆ T` and at least `(1 − ε/2)|F_j|` of `F_j·c` is still uncovered.
/// Candidates are scanned in increasing element order, once accepting only
/// tiles disjoint from those already placed and then again with the
/// `ε/2` allowance.
pub fn cover(group: &Group, set: &FiniteSubset, plan: &TilingPlan, seq: &FolnerSequence) -> Result<Cover> {
    let points = group.subset_points(set)?;
    let position: FxHashMap<Point, u32> = points.iter().enumerate().map(|(k, &p)| (p, k as u32)).collect();
    let mut covered = vec![false; points.len()];
    let keep = Ratio::from_integer(1) - plan.eps / Ratio::from_integer(2);
    let mut centers = vec![FiniteSubset::empty(); plan.scales.len()];
    let mut slots = Vec::new();
    for (s, &j) in plan.scales.iter().enumerate().rev() {
        let tile = seq.points(j)?;
        let needed = keep * Ratio::from_integer(tile.len() as i128);
        let candidates = if tile.contains(&Point::ORIGIN) {
            set.clone()
        } else {
            let mut c = Vec::new();
            for &k in &tile {
                let k_inv = group.inverse_point(k)?;
                for &t in &points {
                    c.push(group.encode(group.mul_points(k_inv, t)?)?);
                }
            }
            FiniteSubset::from_elements(c)
        };
        let mut chosen = Vec::new();
        // first pass takes disjoint tiles only, the second allows the ε/2 overlap
        for quota in [Ratio::from_integer(tile.len() as i128), needed] {
            'candidates: for c in candidates.iter() {
                let cp = group.decode(c)?;
                slots.clear();
                let mut fresh = 0usize;
                for (seen, &k) in tile.iter().enumerate() {
                    let Some(&slot) = position.get(&group.mul_points(k, cp)?) else { continue 'candidates };
                    if !covered[slot as usize] {
                        fresh += 1;
                    }
                    slots.push(slot);
                    let best = fresh + tile.len() - seen - 1;
                    if Ratio::from_integer(best as i128) < quota {
                        continue 'candidates;
                    }
                }
                for &slot in &slots {
                    covered[slot as usize] = true;
                }
                chosen.push(c);
            }
        }
        centers[s] = FiniteSubset::from_elements(chosen);
    }
    Ok(Cover { centers })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub lhs: Rational,
    pub rhs: Rational,
}

impl Assertion {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }

    pub fn slack(&self) -> Rational {
        self.rhs - self.lhs
    }
}

/// Exact evaluation of the four covering inequalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub set_size: usize,
    pub covered_size: usize,
    pub tile_mass: u64,
    /// `|T′ \ T| ≤ 0`.
    pub inside: Assertion,
    /// `|T \ T′| ≤ ε|T|`.
    pub uncovered: Assertion,
    /// `Σ|F_j||R_s| ≤ (1 + ε)|T′|`.
    pub overlap_covered: Assertion,
    /// `Σ|F_j||R_s| ≤ (1 + ε)|T|`.
    pub overlap_total: Assertion,
}

impl CoverReport {
    pub fn assertions(&self) -> [&Assertion; 4] {
        [&self.inside, &self.uncovered, &self.overlap_covered, &self.overlap_total]
    }

    pub fn all_hold(&self) -> bool {
        self.assertions().iter().all(|a| a.holds())
    }
}

/// `T′ = ⋃_s F_{j_s}·R_s`.
pub fn covered_region(group: &Group, plan: &TilingPlan, cover: &Cover, seq: &FolnerSequence) -> Result<FiniteSubset> {
    let mut out = Vec::new();
    for (&j, centers) in plan.scales.iter().zip(&cover.centers) {
        let tile = seq.points(j)?;
        for c in centers.iter() {
            let cp = group.decode(c)?;
            for &k in &tile {
                out.push(group.encode(group.mul_points(k, cp)?)?);
            }
        }
    }
    Ok(FiniteSubset::from_elements(out))
}

pub fn verify_cover(
    group: &Group,
    set: &FiniteSubset,
    plan: &TilingPlan,
    cover: &Cover,
    seq: &FolnerSequence,
) -> Result<CoverReport> {
    if cover.centers.len() != plan.scales.len() {
        return Err(Error::Domain("cover and plan have different numbers of scales".into()));
    }
    let region = covered_region(group, plan, cover, seq)?;
    let mut tile_mass = 0u64;
    for (&j, centers) in plan.scales.iter().zip(&cover.centers) {
        tile_mass += seq.size(j)? * centers.len() as u64;
    }
    let r = |x: usize| Ratio::from_integer(x as i128);
    let one_eps = Ratio::from_integer(1) + plan.eps;
    let mass = Ratio::from_integer(tile_mass as i128);
    Ok(CoverReport {
        set_size: set.len(),
        covered_size: region.len(),
        tile_mass,
        inside: Assertion { lhs: r(region.difference(set).len()), rhs: Ratio::zero() },
        uncovered: Assertion { lhs: r(set.difference(&region).len()), rhs: plan.eps * r(set.len()) },
        overlap_covered: Assertion { lhs: mass, rhs: one_eps * r(region.len()) },
        overlap_total: Assertion { lhs: mass, rhs: one_eps * r(set.len()) },
    })
}

/// Centre sets listed as group elements, for reports.
pub fn center_lists(cover: &Cover) -> Vec<Vec<GroupElement>> {
    cover.centers.iter().map(|c| c.iter().collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_counts() {
        assert_eq!(scale_count_bound(Ratio::new(1, 2)).unwrap(), 3);
        assert_eq!(scale_count_bound(Ratio::new(1, 4)).unwrap(), 11);
        assert_eq!(scale_count_bound(Ratio::new(9, 10)).unwrap(), 1);
        assert!(scale_count_bound(Ratio::from_integer(1)).is_err());
    }

    #[test]
    fn perfect_interval_tiling() {
        let z = Group::z();
        let seq = FolnerSequence::boxes(&z);
        let plan = TilingPlan::manual(vec![10], Ratio::new(1, 4)).unwrap();
        let t = seq.set(100).unwrap();
        let c = cover(&z, &t, &plan, &seq).unwrap();
        let tens: Vec<i64> = z.subset_points(&c.centers[0]).unwrap().iter().map(|p| p.0[0]).collect();
        let mut sorted = tens.clone();
        sorted.sort();
        assert_eq!(sorted, (0..10).map(|k| 10 * k).collect::<Vec<_>>());
        let report = verify_cover(&z, &t, &plan, &c, &seq).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.uncovered.lhs, Ratio::zero());
        assert_eq!(report.tile_mass, report.covered_size as u64);
    }

    #[test]
    fn empty_cover_report() {
        let z = Group::z();
        let seq = FolnerSequence::boxes(&z);
        let plan = TilingPlan::manual(vec![10], Ratio::new(1, 2)).unwrap();
        let t = seq.set(20).unwrap();
        let empty = Cover { centers: vec![FiniteSubset::empty()] };
        let report = verify_cover(&z, &t, &plan, &empty, &seq).unwrap();
        assert!(report.inside.holds() && report.overlap_covered.holds() && report.overlap_total.holds());
        assert!(!report.uncovered.holds());
    }

    #[test]
    fn z_plan_scales() {
        let seq = FolnerSequence::boxes(&Group::z());
        let p = plan(&seq, Ratio::new(1, 2), &PlanOptions::default()).unwrap();
        // [0,j) is 1/8-invariant under [0,m) once (j − m + 1)/j ≥ 7/8
        assert_eq!(p.scales, vec![2, 8, 56]);
        assert_eq!(p.threshold, 439);
    }

    #[test]
    fn loose_eps_has_one_scale() {
        let seq = FolnerSequence::boxes(&Group::z2());
        let p = plan(&seq, Ratio::new(9, 10), &PlanOptions::default()).unwrap();
        assert_eq!(p.scales.len(), 1);
    }

    #[test]
    fn cover_is_deterministic_and_uncovered_share_stays_small() {
        let z2 = Group::z2();
        let seq = FolnerSequence::boxes(&z2);
        let eps = Ratio::new(1, 4);
        let p = plan(&seq, eps, &PlanOptions::default()).unwrap();
        for i in p.threshold + 1..p.threshold + 12 {
            let set = seq.set(i).unwrap();
            let c = cover(&z2, &set, &p, &seq).unwrap();
            assert_eq!(cover(&z2, &set, &p, &seq).unwrap(), c);
            let report = verify_cover(&z2, &set, &p, &c, &seq).unwrap();
            assert!(report.uncovered.lhs < report.uncovered.rhs, "i = {i}");
            assert!(report.all_hold());
        }
    }
}
