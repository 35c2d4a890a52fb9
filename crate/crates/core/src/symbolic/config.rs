//! Partial configurations and the shift action `(g·t)(h) = t(hg)`.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, Group, GroupElement};
use crate::{Rational, Symbol};

/// A map from a finite set of group elements to letters. Values are stored
/// in the support's index order, so they already spell `cont(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PartialConfiguration {
    support: FiniteSubset,
    values: Vec<Symbol>,
}

impl PartialConfiguration {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(support: FiniteSubset, values: Vec<Symbol>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::Domain(format!("{} values for a support of {}", values.len(), support.len())));
        }
        Ok(PartialConfiguration { support, values })
    }

    /// Builds from `(element, letter)` pairs in any order. Repeating an
    /// element with a different letter is an error.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (GroupElement, Symbol)>) -> Result<Self> {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        pairs.sort_unstable();
        pairs.dedup();
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain(format!("element {} assigned two letters", w[0].0)));
        }
        let (elems, values): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        Ok(PartialConfiguration { support: FiniteSubset::from_sorted(elems)?, values })
    }

    pub fn constant(support: FiniteSubset, a: Symbol) -> Self {
        let values = vec![a; support.len()];
        PartialConfiguration { support, values }
    }

    pub fn support(&self) -> &FiniteSubset {
        &self.support
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, g: GroupElement) -> Option<Symbol> {
        self.support.position(g).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (GroupElement, Symbol)> + '_ {
        self.support.iter().zip(self.values.iter().copied())
    }

    /// Letters listed in increasing element order.
    pub fn cont(&self) -> Vec<Symbol> {
        self.values.clone()
    }

    /// Restriction to `set ∩ supp(t)`.
    pub fn restrict_to(&self, set: &FiniteSubset) -> Self {
        let pairs = self.iter().filter(|(g, _)| set.contains(*g));
        let (elems, values): (Vec<_>, Vec<_>) = pairs.unzip();
        PartialConfiguration { support: FiniteSubset::from_sorted(elems).expect("subsequence of a sorted list"), values }
    }
}

/// `(g·t)(h) = t(hg)`; the support becomes `supp(t)·g⁻¹`.
pub fn translate(group: &Group, g: GroupElement, t: &PartialConfiguration) -> Result<PartialConfiguration> {
    let g_inv = group.inverse(g)?;
    let pairs = t
        .iter()
        .map(|(k, a)| Ok((group.multiply(k, g_inv)?, a)))
        .collect::<Result<Vec<_>>>()?;
    PartialConfiguration::from_pairs(pairs)
}

/// Fraction of the common support where the two configurations differ.
pub fn hamming(t1: &PartialConfiguration, t2: &PartialConfiguration) -> Result<Rational> {
    if t1.support() != t2.support() {
        return Err(Error::Domain("configurations have different supports".into()));
    }
    if t1.is_empty() {
        return Err(Error::Domain("Hamming distance of empty configurations".into()));
    }
    let differ = t1.values().iter().zip(t2.values()).filter(|(a, b)| a != b).count();
    Ok(Ratio::new(differ as i128, t1.len() as i128))
}
