use nalgebra::{DMatrix, DVector};

use super::rng::{site_word, unit_f64, SplitMix64};
use crate::error::{Error, Result};
use crate::group::{FiniteSubset, Group, GroupKind};
use crate::symbolic::{ConfigurationSource, PartialConfiguration};
use crate::Symbol;

const SUM_TOLERANCE: f64 = 1e-12;
const STATIONARY_TOLERANCE: f64 = 1e-10;

/// Entropy in bits with `0·log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Domain("probability vector is empty".into()));
        }
        if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Domain(format!("negative or non-finite entry in {p:?}")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Domain(format!("entries sum to {total}, not 1")));
        }
        Ok(ProbabilityVector(p))
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.0)
    }

    /// Inverse-CDF draw from a uniform `u` in `[0, 1)`.
    fn draw(&self, u: f64) -> Symbol {
        let mut acc = 0.0;
        let mut last = 0;
        for (a, &p) in self.0.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            acc += p;
            last = a;
            if u < acc {
                return a as Symbol;
            }
        }
        last as Symbol
    }
}

/// Letter frequencies of `cont(t)`.
pub fn empirical_frequencies(t: &PartialConfiguration, alphabet_size: usize) -> Result<ProbabilityVector> {
    if t.is_empty() {
        return Err(Error::Domain("empirical frequencies of an empty configuration".into()));
    }
    let mut counts = vec![0u64; alphabet_size];
    for &a in t.values() {
        *counts
            .get_mut(a as usize)
            .ok_or_else(|| Error::Domain(format!("symbol {a} outside alphabet of size {alphabet_size}")))? += 1;
    }
    let n = t.len() as f64;
    let p: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let total: f64 = p.iter().sum();
    ProbabilityVector::new(p.into_iter().map(|x| x / total).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bernoulli {
    p: ProbabilityVector,
}

impl Bernoulli {
    pub fn new(p: ProbabilityVector) -> Self {
        Bernoulli { p }
    }

    pub fn probabilities(&self) -> &ProbabilityVector {
        &self.p
    }

    /// Letter at a site: an inverse-CDF draw from the site's own random word.
    pub fn letter_at(&self, seed: u64, index: u128) -> Symbol {
        self.p.draw(unit_f64(site_word(seed, index)))
    }
}

/// Stationary Markov chain on ℤ.
#[derive(Clone, Debug, PartialEq)]
pub struct Markov {
    transition: Vec<ProbabilityVector>,
    stationary: Vec<f64>,
}

impl Markov {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 || rows.iter().any(|r| r.len() != k) {
            return Err(Error::Domain("transition matrix must be square and nonempty".into()));
        }
        let transition = rows.into_iter().map(ProbabilityVector::new).collect::<Result<Vec<_>>>()?;
        if !strongly_connected(&transition) {
            return Err(Error::Domain("transition matrix is not irreducible".into()));
        }
        let stationary = stationary_vector(&transition)?;
        Ok(Markov { transition, stationary })
    }

    pub fn transition(&self) -> &[ProbabilityVector] {
        &self.transition
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// `max_j |(πP)_j − π_j|`.
    pub fn stationary_residual(&self) -> f64 {
        let k = self.stationary.len();
        (0..k)
            .map(|j| {
                let flow: f64 = (0..k).map(|i| self.stationary[i] * self.transition[i].entries()[j]).sum();
                (flow - self.stationary[j]).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn entropy_rate(&self) -> f64 {
        self.stationary.iter().zip(&self.transition).map(|(pi, row)| pi * row.entropy()).sum()
    }

    /// A path of `len` letters started from the stationary law.
    pub fn path(&self, len: usize, seed: u64) -> Vec<Symbol> {
        let start = ProbabilityVector(self.stationary.clone());
        let mut rng = SplitMix64::new(seed);
        let mut out = Vec::with_capacity(len);
        if len == 0 {
            return out;
        }
        let mut state = start.draw(rng.next_f64());
        out.push(state);
        for _ in 1..len {
            state = self.transition[state as usize].draw(rng.next_f64());
            out.push(state);
        }
        out
    }
}

fn strongly_connected(transition: &[ProbabilityVector]) -> bool {
    let k = transition.len();
    let reach = |forward: bool| {
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..k {
                let p = if forward { transition[i].entries()[j] } else { transition[j].entries()[i] };
                if p > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// Solves `π(P − I) = 0, Σπ = 1` with the last balance equation replaced by
/// the normalisation.
fn stationary_vector(transition: &[ProbabilityVector]) -> Result<Vec<f64>> {
    let k = transition.len();
    let mut a = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            a[(j, i)] = transition[i].entries()[j] - if i == j { 1.0 } else { 0.0 };
        }
    }
    for i in 0..k {
        a[(k - 1, i)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(k);
    b[k - 1] = 1.0;
    let pi = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Domain("stationary equations are singular".into()))?;
    let pi: Vec<f64> = pi.iter().map(|&x| x.max(0.0)).collect();
    let markov = Markov { transition: transition.to_vec(), stationary: pi };
    let residual = markov.stationary_residual();
    if residual >= STATIONARY_TOLERANCE {
        return Err(Error::Domain(format!("stationary residual {residual:e} too large")));
    }
    Ok(markov.stationary)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Measure {
    Bernoulli(Bernoulli),
    Markov(Markov),
}

impl Measure {
    pub fn bernoulli(p: Vec<f64>) -> Result<Self> {
        Ok(Measure::Bernoulli(Bernoulli::new(ProbabilityVector::new(p)?)))
    }

    pub fn markov(rows: Vec<Vec<f64>>) -> Result<Self> {
        Ok(Measure::Markov(Markov::new(rows)?))
    }

    /// Parses `bernoulli:0.5,0.5` or `markov:[[0.5,0.5],[1,0]]`.
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, body) = text
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("measure `{text}` lacks a `kind:` prefix")))?;
        match kind.trim().to_ascii_lowercase().as_str() {
            "bernoulli" => {
                let p = body
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                Self::bernoulli(p)
            }
            "markov" => {
                let rows: Vec<Vec<f64>> =
                    serde_json::from_str(body).map_err(|e| Error::Parse(format!("transition matrix: {e}")))?;
                Self::markov(rows)
            }
            other => Err(Error::Parse(format!("unknown measure kind `{other}`"))),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        match self {
            Measure::Bernoulli(b) => b.p.len(),
            Measure::Markov(m) => m.transition.len(),
        }
    }

    /// Kolmogorov–Sinai entropy of the shift, in bits per site.
    pub fn ks_entropy(&self) -> f64 {
        match self {
            Measure::Bernoulli(b) => b.p.entropy(),
            Measure::Markov(m) => m.entropy_rate(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Measure::Bernoulli(b) => format!(
                "bernoulli:{}",
                b.p.entries().iter().map(f64::to_string).collect::<Vec<_>>().join(",")
            ),
            Measure::Markov(m) => format!(
                "markov:[{}]",
                m.transition
                    .iter()
                    .map(|r| format!("[{}]", r.entries().iter().map(f64::to_string).collect::<Vec<_>>().join(",")))
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        }
    }

    pub fn sample(&self, group: &Group, set: &FiniteSubset, seed: u64) -> Result<PartialConfiguration> {
        match self {
            Measure::Bernoulli(b) => {
                let values = set.iter().map(|g| b.letter_at(seed, g.index())).collect();
                PartialConfiguration::new(set.clone(), values)
            }
            Measure::Markov(m) => {
                if group.kind() != GroupKind::Lattice(1) {
                    return Err(Error::Domain("Markov samples are defined on ℤ only".into()));
                }
                if set.is_empty() {
                    return Ok(PartialConfiguration::empty());
                }
                let coords = set.iter().map(|g| Ok(group.decode(g)?.0[0])).collect::<Result<Vec<i64>>>()?;
                let lo = *coords.iter().min().unwrap();
                let hi = *coords.iter().max().unwrap();
                if (hi - lo + 1) as usize != coords.len() {
                    return Err(Error::Domain("Markov samples need an interval of ℤ".into()));
                }
                let path = m.path(coords.len(), seed);
                let values = coords.iter().map(|&c| path[(c - lo) as usize]).collect();
                PartialConfiguration::new(set.clone(), values)
            }
        }
    }
}

/// A measure together with a seed: one fixed random point.
#[derive(Clone, Debug)]
pub struct SampledSource {
    pub measure: Measure,
    pub seed: u64,
}

impl ConfigurationSource for SampledSource {
    fn alphabet_size(&self) -> usize {
        self.measure.alphabet_size()
    }

    fn restrict(&self, group: &Group, set: &FiniteSubset) -> Result<PartialConfiguration> {
        self.measure.sample(group, set, self.seed)
    }
}
