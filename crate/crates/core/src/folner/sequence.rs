use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, Group, GroupKind, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `F_n = [0,n)^d`, or `[0,n)×[0,n)×[0,n²)` in the Heisenberg group; `n ≥ 1`.
    Boxes,
    /// Boxes of side `2^i`, `i ≥ 0`.
    Dyadic,
    /// A given list of sets, indexed from 0.
    Explicit(Arc<Vec<FiniteSubset>>),
}

/// A lazily generated sequence of finite sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerSequence {
    group: Group,
    family: Family,
    name: String,
}

impl FolnerSequence {
    pub fn boxes(group: &Group) -> Self {
        FolnerSequence { group: group.clone(), family: Family::Boxes, name: "boxes".into() }
    }

    pub fn dyadic(group: &Group) -> Self {
        FolnerSequence { group: group.clone(), family: Family::Dyadic, name: "dyadic".into() }
    }

    pub fn explicit(group: &Group, name: &str, sets: Vec<FiniteSubset>) -> Result<Self> {
        if sets.iter().any(FiniteSubset::is_empty) {
            return Err(Error::Domain("every set of the sequence must be nonempty".into()));
        }
        Ok(FolnerSequence { group: group.clone(), family: Family::Explicit(Arc::new(sets)), name: name.into() })
    }

    /// Looks up a built-in family by name (`boxes`, `dyadic`).
    pub fn from_id(group: &Group, id: &str) -> Result<Self> {
        match id {
            "boxes" => Ok(Self::boxes(group)),
            "dyadic" => Ok(Self::dyadic(group)),
            other => Err(Error::Parse(format!("unknown family `{other}`"))),
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn first_index(&self) -> usize {
        match self.family {
            Family::Boxes => 1,
            Family::Dyadic | Family::Explicit(_) => 0,
        }
    }

    /// Last valid index, for finite sequences.
    pub fn last_index(&self) -> Option<usize> {
        match &self.family {
            Family::Explicit(sets) => Some(sets.len().saturating_sub(1)),
            _ => None,
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.first_index() || self.last_index().is_some_and(|last| i > last) {
            return Err(Error::Domain(format!("index {i} outside the `{}` sequence", self.name)));
        }
        Ok(())
    }

    /// Side length of box `i`.
    pub fn side(&self, i: usize) -> Result<i64> {
        self.check_index(i)?;
        match self.family {
            Family::Boxes => Ok(i as i64),
            Family::Dyadic if i < 40 => Ok(1 << i),
            Family::Dyadic => Err(Error::Range(format!("side 2^{i} is too large"))),
            Family::Explicit(_) => Err(Error::Unsupported("explicit sequences have no side length".into())),
        }
    }

    /// Coordinate extents `[0, e_k)` of box `i`.
    pub fn extents(&self, i: usize) -> Result<Vec<i64>> {
        let n = self.side(i)?;
        Ok(match self.group.kind() {
            GroupKind::Lattice(d) => vec![n; d as usize],
            GroupKind::Heisenberg => vec![n, n, n.checked_mul(n).ok_or_else(|| Error::Range("side too large".into()))?],
        })
    }

    pub fn size(&self, i: usize) -> Result<u64> {
        match &self.family {
            Family::Explicit(sets) => {
                self.check_index(i)?;
                Ok(sets[i].len() as u64)
            }
            _ => self
                .extents(i)?
                .iter()
                .try_fold(1u64, |acc, &e| acc.checked_mul(e as u64))
                .ok_or_else(|| Error::Range("set size overflows".into())),
        }
    }

    pub fn points(&self, i: usize) -> Result<Vec<Point>> {
        match &self.family {
            Family::Explicit(sets) => {
                self.check_index(i)?;
                self.group.subset_points(&sets[i])
            }
            _ => {
                let ext = self.extents(i)?;
                let mut pts = Vec::with_capacity(self.size(i)? as usize);
                let e = |k: usize| ext.get(k).copied().unwrap_or(1);
                for a in 0..e(0) {
                    for b in 0..e(1) {
                        for c in 0..e(2) {
                            pts.push(Point([a, b, c]));
                        }
                    }
                }
                Ok(pts)
            }
        }
    }

    pub fn set(&self, i: usize) -> Result<FiniteSubset> {
        match &self.family {
            Family::Explicit(sets) => {
                self.check_index(i)?;
                Ok(sets[i].clone())
            }
            _ => self.group.subset_from_points(self.points(i)?),
        }
    }
}

/// The built-in families of a group.
pub fn builtin_sequences(group: &Group) -> Vec<FolnerSequence> {
    vec![FolnerSequence::boxes(group), FolnerSequence::dyadic(group)]
}
