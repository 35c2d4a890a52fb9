//! Cellular maps `π(x)(g) = τ(m ↦ x(m·g))` and their action on finite
//! configurations.

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, Group, GroupElement};
use crate::symbolic::PartialConfiguration;
use crate::Symbol;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularMap {
    memory: FiniteSubset,
    source_size: usize,
    target_size: usize,
    /// Indexed by the window read in memory order, first element most
    /// significant, digits in base `source_size`.
    table: Vec<Symbol>,
}

impl CellularMap {
    /// Tabulates `rule` over all windows. `rule` receives the letters at
    /// `memory` in increasing element order. The identity is added to the
    /// memory set when missing; the rule never sees its letter.
    pub fn new(
        memory: &FiniteSubset,
        source_size: usize,
        target_size: usize,
        rule: impl Fn(&[Symbol]) -> Symbol,
    ) -> Result<Self> {
        if source_size == 0 || target_size == 0 {
            return Err(Error::Domain("alphabets must be nonempty".into()));
        }
        let given = memory.clone();
        let memory = memory.union(&FiniteSubset::singleton(GroupElement::IDENTITY));
        let cells = (source_size as u128)
            .checked_pow(memory.len() as u32)
            .filter(|&c| c <= 1 << 24)
            .ok_or_else(|| Error::Budget(format!("rule table over {} cells is too large", memory.len())))?;
        let keep: Vec<bool> = memory.iter().map(|m| given.contains(m)).collect();
        let mut table = Vec::with_capacity(cells as usize);
        let mut window = vec![0 as Symbol; memory.len()];
        let mut seen = Vec::with_capacity(memory.len());
        for code in 0..cells {
            let mut x = code;
            for slot in window.iter_mut().rev() {
                *slot = (x % source_size as u128) as Symbol;
                x /= source_size as u128;
            }
            seen.clear();
            seen.extend(window.iter().zip(&keep).filter(|(_, &k)| k).map(|(&a, _)| a));
            let out = rule(&seen);
            if out as usize >= target_size {
                return Err(Error::Domain(format!("rule produced {out}, outside target alphabet")));
            }
            table.push(out);
        }
        Ok(CellularMap { memory, source_size, target_size, table })
    }

    /// Letter-by-letter relabelling (memory `{identity}`).
    pub fn relabel(map: &[Symbol], target_size: usize) -> Result<Self> {
        Self::new(&FiniteSubset::singleton(GroupElement::IDENTITY), map.len(), target_size, |w| map[w[0] as usize])
    }

    pub fn memory(&self) -> &FiniteSubset {
        &self.memory
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn rule(&self, window: &[Symbol]) -> Symbol {
        let code = window.iter().fold(0usize, |acc, &a| acc * self.source_size + a as usize);
        self.table[code]
    }

    /// `M·T`, the cells read when evaluating on `T`.
    pub fn dependence(&self, group: &Group, set: &FiniteSubset) -> Result<FiniteSubset> {
        let mut out = Vec::with_capacity(set.len() * self.memory.len());
        for g in set.iter() {
            for m in self.memory.iter() {
                out.push(group.multiply(m, g)?);
            }
        }
        Ok(FiniteSubset::from_elements(out))
    }
}

/// Output on the largest `T` with `M·T ⊆ supp(t)`.
pub fn apply_cellular(group: &Group, map: &CellularMap, t: &PartialConfiguration) -> Result<PartialConfiguration> {
    let mut elems = Vec::new();
    let mut values = Vec::new();
    let mut window = Vec::with_capacity(map.memory.len());
    // The identity is in M, so every g in the output lies in supp(t).
    'sites: for g in t.support().iter() {
        window.clear();
        for m in map.memory.iter() {
            match t.get(group.multiply(m, g)?) {
                Some(a) => {
                    if a as usize >= map.source_size {
                        return Err(Error::Domain(format!("symbol {a} outside source alphabet")));
                    }
                    window.push(a)
                }
                None => continue 'sites,
            }
        }
        elems.push(g);
        values.push(map.rule(&window));
    }
    PartialConfiguration::new(FiniteSubset::from_sorted(elems)?, values)
}
