//! Points of `A^G` that can be queried on finite windows.

use super::cellular::{apply_cellular, CellularMap};
use super::config::PartialConfiguration;
use crate::error::{Error, Result};
use crate::group::{FiniteSubset, Group};
use crate::Symbol;

pub trait ConfigurationSource: Sync {
    fn alphabet_size(&self) -> usize;

    /// The window `pr_F(x)`.
    fn restrict(&self, group: &Group, set: &FiniteSubset) -> Result<PartialConfiguration>;
}

pub fn restrict<S: ConfigurationSource + ?Sized>(
    source: &S,
    group: &Group,
    set: &FiniteSubset,
) -> Result<PartialConfiguration> {
    source.restrict(group, set)
}

#[derive(Clone, Debug)]
pub struct ConstantSource {
    pub letter: Symbol,
    pub alphabet_size: usize,
}

impl ConfigurationSource for ConstantSource {
    fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    fn restrict(&self, _group: &Group, set: &FiniteSubset) -> Result<PartialConfiguration> {
        Ok(PartialConfiguration::constant(set.clone(), self.letter))
    }
}

/// A finite configuration; asking outside its support fails.
#[derive(Clone, Debug)]
pub struct FiniteSource {
    pub config: PartialConfiguration,
    pub alphabet_size: usize,
}

impl ConfigurationSource for FiniteSource {
    fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    fn restrict(&self, _group: &Group, set: &FiniteSubset) -> Result<PartialConfiguration> {
        if !set.is_subset(self.config.support()) {
            return Err(Error::Domain("window leaves the support of the configuration".into()));
        }
        Ok(self.config.restrict_to(set))
    }
}

/// The image `π(x)` of a source under a cellular map.
pub struct CellularImage<S> {
    pub map: CellularMap,
    pub inner: S,
}

impl<S: ConfigurationSource> ConfigurationSource for CellularImage<S> {
    fn alphabet_size(&self) -> usize {
        self.map.target_size()
    }

    fn restrict(&self, group: &Group, set: &FiniteSubset) -> Result<PartialConfiguration> {
        let window = self.inner.restrict(group, &self.map.dependence(group, set)?)?;
        Ok(apply_cellular(group, &self.map, &window)?.restrict_to(set))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Point;

    #[test]
    fn constant_window() {
        let z = Group::z();
        let set = z.subset_from_points((0..4).map(Point::new1)).unwrap();
        let src = ConstantSource { letter: 0, alphabet_size: 2 };
        assert_eq!(restrict(&src, &z, &set).unwrap().values(), &[0, 0, 0, 0]);
        assert!(restrict(&src, &z, &FiniteSubset::empty()).unwrap().is_empty());
    }

    #[test]
    fn cellular_image_is_consistent_across_windows() {
        use crate::stochastic::{Measure, SampledSource};
        use crate::symbolic::CellularMap;
        let z2 = Group::z2();
        let memory = z2.subset_from_points([Point::new2(1, 0), Point::new2(0, 1)]).unwrap();
        let map = CellularMap::new(&memory, 2, 2, |w| w[0] & w[1]).unwrap();
        let inner = SampledSource { measure: Measure::bernoulli(vec![0.5, 0.5]).unwrap(), seed: 3 };
        let image = CellularImage { map, inner };
        let big = z2.subset_from_points((0..12).flat_map(|a| (0..12).map(move |b| Point::new2(a, b)))).unwrap();
        let small = z2.subset_from_points((3..7).flat_map(|a| (2..9).map(move |b| Point::new2(a, b)))).unwrap();
        let whole = image.restrict(&z2, &big).unwrap();
        assert_eq!(whole.len(), big.len());
        assert_eq!(whole.restrict_to(&small), image.restrict(&z2, &small).unwrap());
    }
}
