//! Computable groups with a fixed enumeration of their elements.
//!
//! Every group element is a natural number (its position in a fixed
//! enumeration, identity = 0). The enumeration for ℤ is the zigzag order
//! `0, +1, −1, +2, −2, …`; for ℤ^d and the discrete Heisenberg group each
//! coordinate is zigzagged and the resulting tuple of naturals is folded
//! with the d-dimensional Cantor pairing
//! `index(x_1..x_d) = Σ_k C(x_1 + … + x_k + k − 1, k)`.
//!
//! Coordinates are accepted up to [`COORD_LIMIT`] in absolute value; anything
//! larger is a range error.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest absolute coordinate value the enumeration accepts.
pub const COORD_LIMIT: i64 = 1 << 40;

/// A group element, identified by its index in the group's enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupElement(pub u128);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(0);

    pub fn index(self) -> u128 {
        self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Canonical coordinates of an element. Unused trailing coordinates are 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Point(pub [i64; 3]);

impl Point {
    pub const ORIGIN: Point = Point([0, 0, 0]);

    pub fn new1(a: i64) -> Self {
        Point([a, 0, 0])
    }

    pub fn new2(a: i64, b: i64) -> Self {
        Point([a, b, 0])
    }

    pub fn new3(a: i64, b: i64, c: i64) -> Self {
        Point([a, b, c])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// ℤ^d for d in 1..=3.
    Lattice(u8),
    /// Discrete Heisenberg group with `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+a·b')`.
    Heisenberg,
}

/// A finitely generated computable group with an ordered symmetric
/// generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    kind: GroupKind,
    generators: Vec<Point>,
}

impl Group {
    pub fn z() -> Self {
        Self::lattice(1).expect("rank 1 is supported")
    }

    pub fn z2() -> Self {
        Self::lattice(2).expect("rank 2 is supported")
    }

    pub fn lattice(rank: u8) -> Result<Self> {
        if !(1..=3).contains(&rank) {
            return Err(Error::Unsupported(format!("ℤ^{rank} (supported ranks are 1..=3)")));
        }
        let mut generators = Vec::with_capacity(2 * rank as usize);
        for axis in 0..rank as usize {
            let mut plus = [0; 3];
            plus[axis] = 1;
            let mut minus = [0; 3];
            minus[axis] = -1;
            generators.push(Point(plus));
            generators.push(Point(minus));
        }
        Ok(Group { kind: GroupKind::Lattice(rank), generators })
    }

    /// Heisenberg group generated by `x, x⁻¹, y, y⁻¹` in that order.
    pub fn heisenberg() -> Self {
        Group {
            kind: GroupKind::Heisenberg,
            generators: vec![
                Point::new3(1, 0, 0),
                Point::new3(-1, 0, 0),
                Point::new3(0, 1, 0),
                Point::new3(0, -1, 0),
            ],
        }
    }

    /// Looks up a group by its CLI identifier (`z`, `z2`, `z3`, `h3`).
    pub fn from_id(id: &str) -> Result<Self> {
        match id.to_ascii_lowercase().as_str() {
            "z" | "z1" => Ok(Self::z()),
            "z2" => Ok(Self::z2()),
            "z3" => Self::lattice(3),
            "h3" | "heisenberg" => Ok(Self::heisenberg()),
            other => Err(Error::Parse(format!("unknown group id `{other}`"))),
        }
    }

    pub fn id(&self) -> &'static str {
        match self.kind {
            GroupKind::Lattice(1) => "z",
            GroupKind::Lattice(2) => "z2",
            GroupKind::Lattice(_) => "z3",
            GroupKind::Heisenberg => "h3",
        }
    }

    /// Same group with a different ordered generating set. The set must be
    /// nonempty and closed under inverses.
    pub fn with_generators(&self, generators: Vec<Point>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Domain("generating set is empty".into()));
        }
        let group = Group { kind: self.kind, generators };
        for &s in &group.generators {
            group.check_point(s)?;
            let inv = group.inverse_point(s)?;
            if !group.generators.contains(&inv) {
                return Err(Error::Domain(format!(
                    "generating set is not symmetric: missing inverse of {}",
                    group.format_point(s)
                )));
            }
        }
        Ok(group)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    /// Number of coordinates of an element.
    pub fn dim(&self) -> usize {
        match self.kind {
            GroupKind::Lattice(d) => d as usize,
            GroupKind::Heisenberg => 3,
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self.kind, GroupKind::Lattice(_))
    }

    pub fn generator_points(&self) -> &[Point] {
        &self.generators
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        self.generators
            .iter()
            .map(|&p| self.encode(p).expect("generators are in range"))
            .collect()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::IDENTITY
    }

    fn check_point(&self, p: Point) -> Result<()> {
        let dim = self.dim();
        for (axis, &c) in p.0.iter().enumerate() {
            if axis >= dim && c != 0 {
                return Err(Error::Domain(format!("coordinate {axis} must be 0 in {}", self.id())));
            }
            if c.abs() > COORD_LIMIT {
                return Err(Error::Range(format!("|{c}| exceeds 2^40")));
            }
        }
        Ok(())
    }

    /// Index of the element with the given coordinates.
    pub fn encode(&self, p: Point) -> Result<GroupElement> {
        self.check_point(p)?;
        let dim = self.dim();
        let mut naturals = [0u128; 3];
        for axis in 0..dim {
            naturals[axis] = zigzag(p.0[axis]) as u128;
        }
        cantor_index(&naturals[..dim]).map(GroupElement)
    }

    /// Coordinates of the element with the given index.
    pub fn decode(&self, g: GroupElement) -> Result<Point> {
        let dim = self.dim();
        let naturals = cantor_decode(g.0, dim)?;
        let mut p = [0i64; 3];
        for axis in 0..dim {
            let z = naturals[axis];
            if z > (2 * COORD_LIMIT) as u128 {
                return Err(Error::Range(format!("index {} decodes outside ±2^40", g.0)));
            }
            p[axis] = unzigzag(z as u64);
        }
        Ok(Point(p))
    }

    pub fn mul_points(&self, p: Point, q: Point) -> Result<Point> {
        let overflow = || Error::Range("coordinate overflow in multiplication".to_string());
        let [a, b, c] = p.0;
        let [x, y, z] = q.0;
        let r = match self.kind {
            GroupKind::Lattice(_) => Point([
                a.checked_add(x).ok_or_else(overflow)?,
                b.checked_add(y).ok_or_else(overflow)?,
                c.checked_add(z).ok_or_else(overflow)?,
            ]),
            GroupKind::Heisenberg => {
                let twist = a.checked_mul(y).ok_or_else(overflow)?;
                Point([
                    a.checked_add(x).ok_or_else(overflow)?,
                    b.checked_add(y).ok_or_else(overflow)?,
                    c.checked_add(z).and_then(|s| s.checked_add(twist)).ok_or_else(overflow)?,
                ])
            }
        };
        if r.0.iter().any(|v| v.abs() > COORD_LIMIT) {
            return Err(Error::Range(format!("product {} leaves ±2^40", self.format_point(r))));
        }
        Ok(r)
    }

    pub fn inverse_point(&self, p: Point) -> Result<Point> {
        let [a, b, c] = p.0;
        match self.kind {
            GroupKind::Lattice(_) => Ok(Point([-a, -b, -c])),
            GroupKind::Heisenberg => {
                let ab = a
                    .checked_mul(b)
                    .and_then(|ab| ab.checked_sub(c))
                    .ok_or_else(|| Error::Range("coordinate overflow in inverse".into()))?;
                if ab.abs() > COORD_LIMIT {
                    return Err(Error::Range("inverse leaves ±2^40".into()));
                }
                Ok(Point([-a, -b, ab]))
            }
        }
    }

    pub fn multiply(&self, g: GroupElement, h: GroupElement) -> Result<GroupElement> {
        let p = self.mul_points(self.decode(g)?, self.decode(h)?)?;
        self.encode(p)
    }

    pub fn inverse(&self, g: GroupElement) -> Result<GroupElement> {
        let p = self.inverse_point(self.decode(g)?)?;
        self.encode(p)
    }

    /// Cayley neighbours `s·g` for `s` in generator order.
    pub fn neighbors(&self, g: GroupElement) -> Result<Vec<GroupElement>> {
        let p = self.decode(g)?;
        self.neighbor_points(p)?.into_iter().map(|q| self.encode(q)).collect()
    }

    pub fn neighbor_points(&self, p: Point) -> Result<Vec<Point>> {
        self.generators.iter().map(|&s| self.mul_points(s, p)).collect()
    }

    /// Total order used for `cont` and every tie-break: the enumeration index.
    pub fn compare(&self, g: GroupElement, h: GroupElement) -> Ordering {
        g.cmp(&h)
    }

    /// Canonical textual form: `Z:k`, `Z2:(a,b)`, `Z3:(a,b,c)` or `H3:(a,b,c)`.
    pub fn format_point(&self, p: Point) -> String {
        let [a, b, c] = p.0;
        match self.kind {
            GroupKind::Lattice(1) => format!("Z:{a}"),
            GroupKind::Lattice(2) => format!("Z2:({a},{b})"),
            GroupKind::Lattice(_) => format!("Z3:({a},{b},{c})"),
            GroupKind::Heisenberg => format!("H3:({a},{b},{c})"),
        }
    }

    pub fn format_element(&self, g: GroupElement) -> Result<String> {
        Ok(self.format_point(self.decode(g)?))
    }

    pub fn parse_point(&self, text: &str) -> Result<Point> {
        let (prefix, body) = parse_element_text(text)?;
        let expected = match self.kind {
            GroupKind::Lattice(1) => "Z",
            GroupKind::Lattice(2) => "Z2",
            GroupKind::Lattice(_) => "Z3",
            GroupKind::Heisenberg => "H3",
        };
        if prefix != expected {
            return Err(Error::Parse(format!("`{text}` is not an element of {}", self.id())));
        }
        if body.len() != self.dim() {
            return Err(Error::Parse(format!("`{text}` has the wrong number of coordinates")));
        }
        let mut p = [0i64; 3];
        p[..body.len()].copy_from_slice(&body);
        let point = Point(p);
        self.check_point(point)?;
        Ok(point)
    }

    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        self.encode(self.parse_point(text)?)
    }

    /// Builds the subset with the given coordinates (duplicates collapse).
    pub fn subset_from_points<I: IntoIterator<Item = Point>>(&self, points: I) -> Result<FiniteSubset> {
        let elems = points.into_iter().map(|p| self.encode(p)).collect::<Result<Vec<_>>>()?;
        Ok(FiniteSubset::from_elements(elems))
    }

    pub fn subset_points(&self, set: &FiniteSubset) -> Result<Vec<Point>> {
        set.iter().map(|g| self.decode(g)).collect()
    }
}

/// Splits `Z2:(1,-2)` into `("Z2", [1, -2])` without checking the group.
pub fn parse_element_text(text: &str) -> Result<(String, Vec<i64>)> {
    let text = text.trim();
    let (prefix, rest) = text
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("`{text}` lacks a group prefix")))?;
    let rest = rest.trim();
    let inner = if let Some(stripped) = rest.strip_prefix('(') {
        stripped
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{text}`")))?
    } else {
        rest
    };
    let coords = inner
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|e| Error::Parse(format!("`{text}`: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((prefix.trim().to_string(), coords))
}

/// Identifies the group a canonical element string belongs to.
pub fn group_of_element_text(text: &str) -> Result<Group> {
    let (prefix, _) = parse_element_text(text)?;
    match prefix.as_str() {
        "Z" => Ok(Group::z()),
        "Z2" => Ok(Group::z2()),
        "Z3" => Group::lattice(3),
        "H3" => Ok(Group::heisenberg()),
        other => Err(Error::Parse(format!("unknown group prefix `{other}`"))),
    }
}

/// `0 ↦ 0, +1 ↦ 1, −1 ↦ 2, +2 ↦ 3, …`
pub fn zigzag(k: i64) -> u64 {
    if k > 0 {
        2 * k as u64 - 1
    } else {
        2 * k.unsigned_abs()
    }
}

pub fn unzigzag(z: u64) -> i64 {
    if z % 2 == 1 {
        (z / 2 + 1) as i64
    } else {
        -((z / 2) as i64)
    }
}

/// `C(m, k)` for `k ≤ 3`, `None` on overflow.
fn small_binomial(m: u128, k: usize) -> Option<u128> {
    match k {
        0 => Some(1),
        1 => Some(m),
        2 => {
            if m < 2 {
                return Some(0);
            }
            let (a, b) = if m.is_multiple_of(2) { (m / 2, m - 1) } else { (m, (m - 1) / 2) };
            a.checked_mul(b)
        }
        3 => {
            if m < 3 {
                return Some(0);
            }
            let mut f = [m, m - 1, m - 2];
            let i3 = f.iter().position(|v| v % 3 == 0).expect("one of three consecutive");
            f[i3] /= 3;
            // a multiple of 6 stays even after dividing by 3
            let i2 = f.iter().position(|v| v % 2 == 0).expect("one factor is even");
            f[i2] /= 2;
            f[0].checked_mul(f[1]).and_then(|x| x.checked_mul(f[2]))
        }
        _ => unreachable!("only ranks up to 3 are enumerated"),
    }
}

pub(crate) fn cantor_index(naturals: &[u128]) -> Result<u128> {
    let overflow = || Error::Range("element index exceeds u128".into());
    let mut partial = 0u128;
    let mut index = 0u128;
    for (k, &x) in naturals.iter().enumerate() {
        partial = partial.checked_add(x).ok_or_else(overflow)?;
        let term = small_binomial(partial + k as u128, k + 1).ok_or_else(overflow)?;
        index = index.checked_add(term).ok_or_else(overflow)?;
    }
    Ok(index)
}

pub(crate) fn cantor_decode(index: u128, dim: usize) -> Result<[u128; 3]> {
    if dim == 1 {
        return Ok([index, 0, 0]);
    }
    // largest s with C(s + dim - 1, dim) <= index
    let fits = |s: u128| matches!(small_binomial(s + dim as u128 - 1, dim), Some(v) if v <= index);
    let mut hi: u128 = 1;
    while fits(hi) {
        hi = hi.checked_mul(2).ok_or_else(|| Error::Range("index too large".into()))?;
    }
    let mut lo = 0u128;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rest = index - small_binomial(lo + dim as u128 - 1, dim).expect("fits");
    let mut out = cantor_decode(rest, dim - 1)?;
    let prefix_sum: u128 = out[..dim - 1].iter().sum();
    out[dim - 1] = lo - prefix_sum;
    Ok(out)
}

/// A finite set of group elements, kept sorted by index without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FiniteSubset {
    elems: Vec<GroupElement>,
}

impl FiniteSubset {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(g: GroupElement) -> Self {
        FiniteSubset { elems: vec![g] }
    }

    pub fn from_elements<I: IntoIterator<Item = GroupElement>>(elems: I) -> Self {
        let mut elems: Vec<_> = elems.into_iter().collect();
        elems.sort_unstable();
        elems.dedup();
        FiniteSubset { elems }
    }

    /// Builds a subset from an already sorted, duplicate-free vector.
    pub fn from_sorted(elems: Vec<GroupElement>) -> Result<Self> {
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("elements are not strictly increasing".into()));
        }
        Ok(FiniteSubset { elems })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.elems.binary_search(&g).is_ok()
    }

    /// Position of `g` in increasing order, if present.
    pub fn position(&self, g: GroupElement) -> Option<usize> {
        self.elems.binary_search(&g).ok()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = GroupElement> + '_ {
        self.elems.iter().copied()
    }

    pub fn as_slice(&self) -> &[GroupElement] {
        &self.elems
    }

    pub fn first(&self) -> Option<GroupElement> {
        self.elems.first().copied()
    }

    pub fn last(&self) -> Option<GroupElement> {
        self.elems.last().copied()
    }

    pub fn is_subset(&self, other: &FiniteSubset) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut j = 0;
        for &g in &self.elems {
            while j < other.elems.len() && other.elems[j] < g {
                j += 1;
            }
            if j == other.elems.len() || other.elems[j] != g {
                return false;
            }
        }
        true
    }

    pub fn union(&self, other: &FiniteSubset) -> FiniteSubset {
        FiniteSubset::from_elements(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &FiniteSubset) -> FiniteSubset {
        FiniteSubset { elems: self.iter().filter(|&g| !other.contains(g)).collect() }
    }

    pub fn intersection(&self, other: &FiniteSubset) -> FiniteSubset {
        FiniteSubset { elems: self.iter().filter(|&g| other.contains(g)).collect() }
    }
}

impl FromIterator<GroupElement> for FiniteSubset {
    fn from_iter<T: IntoIterator<Item = GroupElement>>(iter: T) -> Self {
        FiniteSubset::from_elements(iter)
    }
}
