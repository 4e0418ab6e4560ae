use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::num::Real;

/// Finite probability distribution.
///
/// A distribution may declare the universe it lives on; outcomes of the
/// universe missing from `mass` carry probability zero. Two distributions
/// declared on different universes cannot be compared.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<K: Ord, F: Real> {
    mass: BTreeMap<K, F>,
    universe: Option<BTreeSet<K>>,
}

impl<K: Ord + Clone, F: Real> Distribution<K, F> {
    /// Masses must be non-negative and sum to one.
    pub fn new(mass: impl IntoIterator<Item = (K, F)>) -> Result<Self> {
        let mut merged = BTreeMap::new();
        for (k, p) in mass {
            if p.is_nan() || p < F::zero() {
                return Err(Error::InvalidDistribution("negative or NaN mass".into()));
            }
            let e = merged.entry(k).or_insert_with(F::zero);
            *e = *e + p;
        }
        let total = merged.values().fold(F::zero(), |a, &b| a + b);
        let tol = F::of(1e-12).max(F::epsilon() * F::count(4 * merged.len() as u64 + 4));
        if (total - F::one()).abs() > tol {
            return Err(Error::InvalidDistribution(format!("masses sum to {:?}", total)));
        }
        Ok(Self { mass: merged, universe: None })
    }

    /// Declares the universe; every outcome with mass must belong to it.
    pub fn on_universe(mut self, universe: impl IntoIterator<Item = K>) -> Result<Self> {
        let universe: BTreeSet<K> = universe.into_iter().collect();
        if self.mass.iter().any(|(k, &p)| p > F::zero() && !universe.contains(k)) {
            return Err(Error::SupportMismatch);
        }
        self.universe = Some(universe);
        Ok(self)
    }

    pub fn uniform(outcomes: impl IntoIterator<Item = K>) -> Result<Self> {
        let set: BTreeSet<K> = outcomes.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let p = F::one() / F::count(set.len() as u64);
        Self::new(set.iter().cloned().map(|k| (k, p)))?.on_universe(set)
    }

    pub fn point(outcome: K) -> Self {
        Self { mass: BTreeMap::from([(outcome, F::one())]), universe: None }
    }

    pub fn mass(&self, outcome: &K) -> F {
        self.mass.get(outcome).copied().unwrap_or_else(F::zero)
    }

    /// Outcomes with positive mass.
    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.mass.iter().filter(|(_, &p)| p > F::zero()).map(|(k, _)| k)
    }

    pub fn universe(&self) -> Option<&BTreeSet<K>> {
        self.universe.as_ref()
    }

    pub(crate) fn from_parts_unchecked(mass: BTreeMap<K, F>) -> Self {
        Self { mass, universe: None }
    }
}

/// `Δ(P, Q) = ½ Σ |P(s) − Q(s)|` over the unified support.
pub fn statistical_distance<K: Ord + Clone, F: Real>(p: &Distribution<K, F>, q: &Distribution<K, F>) -> Result<F> {
    match (&p.universe, &q.universe) {
        (Some(a), Some(b)) if a != b => return Err(Error::SupportMismatch),
        (Some(u), None) if q.support().any(|k| !u.contains(k)) => return Err(Error::SupportMismatch),
        (None, Some(u)) if p.support().any(|k| !u.contains(k)) => return Err(Error::SupportMismatch),
        _ => {}
    }
    let keys: BTreeSet<&K> = p.mass.keys().chain(q.mass.keys()).collect();
    let sum = keys.into_iter().fold(F::zero(), |acc, k| acc + (p.mass(k) - q.mass(k)).abs());
    Ok(sum / F::of(2.0))
}
