//! Subshifts of finite type given by forbidden patterns, and counts of
//! locally admissible patterns: assignments on a finite set `F` in which no
//! translate of a forbidden pattern lying inside `F` occurs.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use super::alphabet::Alphabet;
use super::config::PartialConfiguration;
use crate::complexity::{RateRecord, RateSeries};
use crate::error::{Error, Result};
use crate::folner::FolnerSequence;
use crate::group::{group_of_element_text, FiniteSubset, Group, GroupKind, Point};
use crate::quasitiling::{covered_region, Cover, TilingPlan};
use crate::Symbol;

/// Default bound on backtracking nodes per count.
pub const DEFAULT_COUNT_BUDGET: u64 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sft {
    group: Group,
    alphabet: Alphabet,
    forbidden: Vec<PartialConfiguration>,
}

impl Sft {
    pub fn new(group: Group, alphabet: Alphabet, forbidden: Vec<PartialConfiguration>) -> Result<Self> {
        for p in &forbidden {
            if p.is_empty() {
                return Err(Error::Domain("forbidden pattern with empty support".into()));
            }
            for &a in p.values() {
                alphabet.check(a)?;
            }
        }
        Ok(Sft { group, alphabet, forbidden })
    }

    pub fn full_shift(group: Group, alphabet: Alphabet) -> Self {
        Sft { group, alphabet, forbidden: Vec::new() }
    }

    fn pattern(group: &Group, cells: &[(Point, Symbol)]) -> PartialConfiguration {
        PartialConfiguration::from_pairs(cells.iter().map(|&(p, a)| (group.encode(p).expect("small point"), a)))
            .expect("distinct cells")
    }

    /// Binary sequences on ℤ without two adjacent 1s.
    pub fn golden_mean() -> Self {
        let z = Group::z();
        let p = Self::pattern(&z, &[(Point::new1(0), 1), (Point::new1(1), 1)]);
        Sft::new(z, Alphabet::binary(), vec![p]).expect("valid")
    }

    /// Binary configurations on ℤ² without two 1s side by side.
    pub fn hard_squares() -> Self {
        let z2 = Group::z2();
        let h = Self::pattern(&z2, &[(Point::new2(0, 0), 1), (Point::new2(1, 0), 1)]);
        let v = Self::pattern(&z2, &[(Point::new2(0, 0), 1), (Point::new2(0, 1), 1)]);
        Sft::new(z2, Alphabet::binary(), vec![h, v]).expect("valid")
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn forbidden(&self) -> &[PartialConfiguration] {
        &self.forbidden
    }

    /// The same shift with one more forbidden pattern.
    pub fn forbid(&self, pattern: PartialConfiguration) -> Result<Self> {
        let mut forbidden = self.forbidden.clone();
        forbidden.push(pattern);
        Sft::new(self.group.clone(), self.alphabet.clone(), forbidden)
    }

    /// Parses the text format:
    ///
    /// ```text
    /// # golden mean
    /// alphabet 0 1
    /// (Z:0,1) (Z:1,1)
    /// ```
    ///
    /// Each pattern line lists `(element,letter)` cells. The group is taken
    /// from an optional `group <id>` line or else from the first element.
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet: Option<Alphabet> = None;
        let mut group: Option<Group> = None;
        let mut raw_patterns: Vec<Vec<(String, String)>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let context = |e: Error| Error::Parse(format!("line {}: {e}", lineno + 1));
            if let Some(rest) = line.strip_prefix("alphabet") {
                alphabet = Some(Alphabet::new(rest.split_whitespace()).map_err(context)?);
            } else if let Some(rest) = line.strip_prefix("group") {
                group = Some(Group::from_id(rest.trim()).map_err(context)?);
            } else {
                raw_patterns.push(parse_cells(line).map_err(context)?);
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::Parse("missing `alphabet` line".into()))?;
        let group = match group {
            Some(g) => g,
            None => match raw_patterns.first().and_then(|p| p.first()) {
                Some((element, _)) => group_of_element_text(element)?,
                None => return Err(Error::Parse("no `group` line and no patterns to infer it from".into())),
            },
        };
        let forbidden = raw_patterns
            .iter()
            .map(|cells| {
                let pairs = cells
                    .iter()
                    .map(|(e, a)| Ok((group.parse_element(e)?, alphabet.symbol(a)?)))
                    .collect::<Result<Vec<_>>>()?;
                PartialConfiguration::from_pairs(pairs)
            })
            .collect::<Result<Vec<_>>>()?;
        Sft::new(group, alphabet, forbidden)
    }

    pub fn to_text(&self) -> Result<String> {
        let mut out = format!("group {}\nalphabet {}\n", self.group.id(), self.alphabet.names().join(" "));
        for p in &self.forbidden {
            let cells = p
                .iter()
                .map(|(g, a)| Ok(format!("({},{})", self.group.format_element(g)?, self.alphabet.name(a).unwrap())))
                .collect::<Result<Vec<_>>>()?;
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        Ok(out)
    }
}

/// Splits `(Z2:(0,1),a) (Z2:(1,1),b)` into element and letter texts.
fn parse_cells(line: &str) -> Result<Vec<(String, String)>> {
    let mut cells = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for ch in line.chars() {
        match ch {
            '(' => {
                if depth > 0 {
                    current.push(ch);
                }
                depth += 1;
            }
            ')' => {
                depth = depth.checked_sub(1).ok_or_else(|| Error::Parse(format!("unbalanced `)` in `{line}`")))?;
                if depth == 0 {
                    let (element, letter) = current
                        .rsplit_once(',')
                        .ok_or_else(|| Error::Parse(format!("cell `{current}` lacks a letter")))?;
                    cells.push((element.trim().to_string(), letter.trim().to_string()));
                    current.clear();
                } else {
                    current.push(ch);
                }
            }
            c if depth > 0 => current.push(c),
            c if c.is_whitespace() => {}
            c => return Err(Error::Parse(format!("unexpected `{c}` outside a cell in `{line}`"))),
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced `(` in `{line}`")));
    }
    if cells.is_empty() {
        return Err(Error::Parse(format!("empty pattern line `{line}`")));
    }
    Ok(cells)
}

/// Occurrence of a forbidden pattern inside `F`: positions in `F`'s order
/// and the letters they would need.
#[derive(Clone, Debug)]
struct Window {
    positions: Vec<u32>,
    letters: Vec<Symbol>,
}

/// Every translate `supp(P)·g ⊆ F` of every forbidden pattern.
fn windows_in(sft: &Sft, points: &[Point]) -> Result<Vec<Window>> {
    let group = &sft.group;
    let position: FxHashMap<Point, u32> = points.iter().enumerate().map(|(k, &p)| (p, k as u32)).collect();
    let mut out = Vec::new();
    for pattern in &sft.forbidden {
        let cells: Vec<(Point, Symbol)> =
            pattern.iter().map(|(g, a)| Ok((group.decode(g)?, a))).collect::<Result<_>>()?;
        let anchor_inv = group.inverse_point(cells[0].0)?;
        'targets: for &f in points {
            let g = group.mul_points(anchor_inv, f)?;
            let mut positions = Vec::with_capacity(cells.len());
            for &(h, _) in &cells {
                match position.get(&group.mul_points(h, g)?) {
                    Some(&k) => positions.push(k),
                    None => continue 'targets,
                }
            }
            out.push(Window { positions, letters: cells.iter().map(|c| c.1).collect() });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    /// No forbidden pattern fits; `|A|^|F|`.
    Unconstrained,
    Backtracking,
    TransferMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternCount {
    pub count: BigUint,
    /// Whether the count equals the number of patterns of the subshift
    /// itself rather than an upper bound.
    pub exact: bool,
    pub method: CountMethod,
}

impl PatternCount {
    pub fn log2(&self) -> f64 {
        log2_big(&self.count)
    }
}

pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").log2();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("finite").log2() + shift as f64
}

/// Backtracking over the elements of `F` in increasing order; a window is
/// checked when its last element is assigned. Elements outside every window
/// contribute a factor `|A|` each and are not enumerated.
pub fn count_backtracking(sft: &Sft, set: &FiniteSubset, budget: u64) -> Result<BigUint> {
    let points = sft.group.subset_points(set)?;
    let windows = windows_in(sft, &points)?;
    let k = sft.alphabet.len();
    let mut constrained = vec![false; points.len()];
    for w in &windows {
        for &p in &w.positions {
            constrained[p as usize] = true;
        }
    }
    let order: Vec<usize> = (0..points.len()).filter(|&p| constrained[p]).collect();
    let free = points.len() - order.len();
    let mut rank = vec![usize::MAX; points.len()];
    for (r, &p) in order.iter().enumerate() {
        rank[p] = r;
    }
    // windows keyed by the rank of their last element, letters paired with ranks
    let mut closing: Vec<Vec<Vec<(usize, Symbol)>>> = vec![Vec::new(); order.len()];
    for w in &windows {
        let cells: Vec<(usize, Symbol)> = w.positions.iter().map(|&p| rank[p as usize]).zip(w.letters.iter().copied()).collect();
        let last = cells.iter().map(|c| c.0).max().expect("nonempty window");
        closing[last].push(cells);
    }
    let n = order.len();
    let mut assignment: Vec<Symbol> = vec![0; n];
    let mut count: u128 = 0;
    let mut nodes: u64 = 0;
    // next letter to try at each depth
    let mut next: Vec<usize> = vec![0; n + 1];
    let mut depth = 0usize;
    if n == 0 {
        count = 1;
    } else {
        loop {
            if next[depth] == k {
                if depth == 0 {
                    break;
                }
                depth -= 1;
                continue;
            }
            let a = next[depth] as Symbol;
            next[depth] += 1;
            nodes += 1;
            if nodes > budget {
                return Err(Error::Budget(format!("pattern count on {} elements exceeds {budget} steps", set.len())));
            }
            assignment[depth] = a;
            let violated = closing[depth]
                .iter()
                .any(|cells| cells.iter().all(|&(r, b)| assignment[r] == b));
            if violated {
                continue;
            }
            if depth + 1 == n {
                count += 1;
            } else {
                depth += 1;
                next[depth] = 0;
            }
        }
    }
    Ok(BigUint::from(count) * BigUint::from(k).pow(free as u32))
}

/// Coordinates of an interval `F ⊂ ℤ`, if it is one.
fn as_interval(group: &Group, set: &FiniteSubset) -> Result<Option<(i64, usize)>> {
    if group.kind() != GroupKind::Lattice(1) || set.is_empty() {
        return Ok(None);
    }
    let coords: Vec<i64> = set.iter().map(|g| Ok(group.decode(g)?.0[0])).collect::<Result<_>>()?;
    let lo = *coords.iter().min().unwrap();
    let hi = *coords.iter().max().unwrap();
    Ok(((hi - lo + 1) as usize == coords.len()).then_some((lo, coords.len())))
}

/// Transfer-matrix count of locally admissible words of length `n` for an
/// SFT on ℤ. States are words of length `s = max(span − 1, 1)` where `span`
/// is the widest pattern's extent. Returns `None` when the state space would
/// be too large or `n < s`.
pub fn count_transfer(sft: &Sft, n: usize) -> Result<Option<PatternCount>> {
    if sft.group.kind() != GroupKind::Lattice(1) {
        return Ok(None);
    }
    let k = sft.alphabet.len();
    let mut patterns: Vec<Vec<(usize, Symbol)>> = Vec::new();
    let mut span = 1usize;
    for p in &sft.forbidden {
        let cells: Vec<(i64, Symbol)> = p.iter().map(|(g, a)| Ok((sft.group.decode(g)?.0[0], a))).collect::<Result<_>>()?;
        let lo = cells.iter().map(|c| c.0).min().unwrap();
        let cells: Vec<(usize, Symbol)> = cells.into_iter().map(|(c, a)| ((c - lo) as usize, a)).collect();
        span = span.max(cells.iter().map(|c| c.0).max().unwrap() + 1);
        patterns.push(cells);
    }
    let s = (span - 1).max(1);
    if n < s {
        return Ok(None);
    }
    let states = match (k as u64).checked_pow(s as u32) {
        Some(x) if x <= 1 << 20 => x as usize,
        _ => return Ok(None),
    };
    let decode = |mut code: usize, len: usize| {
        let mut w = vec![0 as Symbol; len];
        for slot in w.iter_mut().rev() {
            *slot = (code % k) as Symbol;
            code /= k;
        }
        w
    };
    // placements of pattern cells inside a word, optionally only those ending at its last letter
    let clean = |word: &[Symbol], ending_only: bool| {
        !patterns.iter().any(|cells| {
            let width = cells.iter().map(|c| c.0).max().unwrap() + 1;
            if width > word.len() {
                return false;
            }
            let starts = if ending_only { word.len() - width..=word.len() - width } else { 0..=word.len() - width };
            starts.into_iter().any(|st| cells.iter().all(|&(o, a)| word[st + o] == a))
        })
    };
    let admissible: Vec<bool> = (0..states).map(|u| clean(&decode(u, s), false)).collect();
    let mut next: Vec<Vec<usize>> = vec![Vec::new(); states];
    for u in (0..states).filter(|&u| admissible[u]) {
        let mut word = decode(u, s);
        word.push(0);
        for a in 0..k {
            word[s] = a as Symbol;
            if clean(&word, true) {
                next[u].push((u * k + a) % states);
            }
        }
    }
    let mut vector: Vec<BigUint> = admissible.iter().map(|&ok| if ok { BigUint::one() } else { BigUint::zero() }).collect();
    for _ in s..n {
        let mut fresh = vec![BigUint::zero(); states];
        for (u, c) in vector.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &v in &next[u] {
                fresh[v] += c;
            }
        }
        vector = fresh;
    }
    let count = vector.into_iter().sum();
    Ok(Some(PatternCount { count, exact: essential(&admissible, &next), method: CountMethod::TransferMatrix }))
}

/// Every admissible state has an admissible successor and predecessor, so
/// every locally admissible word extends to a point of the shift.
fn essential(admissible: &[bool], next: &[Vec<usize>]) -> bool {
    let mut has_pred = vec![false; admissible.len()];
    for (u, succ) in next.iter().enumerate() {
        if admissible[u] {
            for &v in succ {
                has_pred[v] = true;
            }
        }
    }
    (0..admissible.len()).filter(|&u| admissible[u]).all(|u| has_pred[u] && !next[u].is_empty())
}

/// Number of locally admissible patterns on `set`, an upper bound on the
/// number of patterns of the subshift on `set` (exact when flagged).
pub fn admissible_patterns(sft: &Sft, set: &FiniteSubset, budget: u64) -> Result<PatternCount> {
    let points = sft.group.subset_points(set)?;
    if windows_in(sft, &points)?.is_empty() {
        return Ok(PatternCount {
            count: BigUint::from(sft.alphabet.len()).pow(set.len() as u32),
            exact: sft.forbidden.is_empty(),
            method: CountMethod::Unconstrained,
        });
    }
    if let Some((_, n)) = as_interval(&sft.group, set)? {
        if let Some(count) = count_transfer(sft, n)? {
            return Ok(count);
        }
    }
    Ok(PatternCount { count: count_backtracking(sft, set, budget)?, exact: false, method: CountMethod::Backtracking })
}

/// Lists the locally admissible patterns on `set`, up to `limit` of them.
pub fn enumerate_patterns(sft: &Sft, set: &FiniteSubset, limit: usize) -> Result<Vec<PartialConfiguration>> {
    let points = sft.group.subset_points(set)?;
    let windows = windows_in(sft, &points)?;
    let k = sft.alphabet.len() as u128;
    let n = set.len() as u32;
    let total = k.checked_pow(n).ok_or_else(|| Error::Budget("too many candidate patterns".into()))?;
    let mut out = Vec::new();
    for code in 0..total {
        let mut x = code;
        let mut values = vec![0 as Symbol; n as usize];
        for slot in values.iter_mut().rev() {
            *slot = (x % k) as Symbol;
            x /= k;
        }
        let bad = windows.iter().any(|w| w.positions.iter().zip(&w.letters).all(|(&p, &a)| values[p as usize] == a));
        if !bad {
            if out.len() == limit {
                return Err(Error::Budget(format!("more than {limit} admissible patterns")));
            }
            out.push(PartialConfiguration::new(set.clone(), values)?);
        }
    }
    Ok(out)
}

/// `log2(count(F_i)) / |F_i|` for each index up to `upto`.
pub fn topological_entropy_estimate(sft: &Sft, seq: &FolnerSequence, upto: usize, budget: u64) -> Result<RateSeries> {
    let mut series = RateSeries::new(seq.name(), "admissible-count");
    for i in seq.first_index()..=upto {
        let set = seq.set(i)?;
        let count = admissible_patterns(sft, &set, budget)?;
        series.push(RateRecord::new(i, set.len() as u64, count.log2()));
    }
    Ok(series)
}

/// Over-count of `log2|Q(T)|`: one admissible tile pattern per placed tile,
/// arbitrary letters on the uncovered rest.
#[derive(Clone, Debug, PartialEq)]
pub struct QBound {
    pub set_size: usize,
    pub uncovered: usize,
    /// `(scale, number of centres, log2 of the tile's admissible count)`.
    pub tiles: Vec<(usize, usize, f64)>,
    pub log2_bound: f64,
    pub alphabet_size: usize,
}

impl QBound {
    /// `((1 + ε)(h + ε) + ε·log2|A|)·|T|`.
    pub fn star_limit(&self, eps: f64, h: f64) -> f64 {
        ((1.0 + eps) * (h + eps) + eps * (self.alphabet_size as f64).log2()) * self.set_size as f64
    }

    pub fn satisfies_star(&self, eps: f64, h: f64) -> bool {
        self.log2_bound <= self.star_limit(eps, h)
    }
}

pub fn q_count_bound(
    sft: &Sft,
    set: &FiniteSubset,
    plan: &TilingPlan,
    cover: &Cover,
    seq: &FolnerSequence,
    budget: u64,
) -> Result<QBound> {
    let group = &sft.group;
    if seq.group() != group {
        return Err(Error::Domain("sequence and subshift live on different groups".into()));
    }
    let region = covered_region(group, plan, cover, seq)?;
    if !region.is_subset(set) {
        return Err(Error::Domain("cover leaves the set".into()));
    }
    let uncovered = set.len() - region.len();
    let mut tiles = Vec::new();
    let mut total = uncovered as f64 * (sft.alphabet.len() as f64).log2();
    for (&j, centers) in plan.scales.iter().zip(&cover.centers) {
        let log2_count = admissible_patterns(sft, &seq.set(j)?, budget)?.log2();
        total += centers.len() as f64 * log2_count;
        tiles.push((j, centers.len(), log2_count));
    }
    Ok(QBound { set_size: set.len(), uncovered, tiles, log2_bound: total, alphabet_size: sft.alphabet.len() })
}
