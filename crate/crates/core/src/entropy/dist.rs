//! Finite distributions, joints, and the information functionals.
//!
//! Everything is in nats; 0·ln 0 = 0 throughout. Keys are any ordered
//! clonable type — walk distributions key directly on group elements,
//! whose structural ordering is canonical.

use crate::{Error, Result};
use std::collections::BTreeMap;

const MASS_TOLERANCE: f64 = 1e-12;

/// A probability distribution on finitely many distinct outcomes.
#[derive(Clone, Debug)]
pub struct FiniteDistribution<K: Ord + Clone> {
    masses: BTreeMap<K, f64>,
}

impl<K: Ord + Clone> FiniteDistribution<K> {
    /// Masses must be positive, keys distinct, total 1 ± 1e−12.
    pub fn new(masses: impl IntoIterator<Item = (K, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut total = 0.0;
        for (key, mass) in masses {
            if !(mass > 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "nonpositive probability {mass}"
                )));
            }
            if map.insert(key, mass).is_some() {
                return Err(Error::InvalidMeasure("duplicate outcome key".into()));
            }
            total += mass;
        }
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMeasure(format!(
                "masses sum to {total}, not 1"
            )));
        }
        Ok(FiniteDistribution { masses: map })
    }

    pub fn point_mass(key: K) -> Self {
        FiniteDistribution {
            masses: [(key, 1.0)].into(),
        }
    }

    pub fn uniform(keys: impl IntoIterator<Item = K>) -> Result<Self> {
        let keys: Vec<K> = keys.into_iter().collect();
        let mass = 1.0 / keys.len() as f64;
        FiniteDistribution::new(keys.into_iter().map(|k| (k, mass)))
    }

    pub fn masses(&self) -> &BTreeMap<K, f64> {
        &self.masses
    }

    pub fn mass(&self, key: &K) -> f64 {
        self.masses.get(key).copied().unwrap_or(0.0)
    }

    pub fn support_size(&self) -> usize {
        self.masses.len()
    }

    /// Shannon entropy −Σ p ln p, in nats.
    pub fn entropy(&self) -> f64 {
        -self
            .masses
            .values()
            .map(|p| if *p > 0.0 { p * p.ln() } else { 0.0 })
            .sum::<f64>()
    }

    /// Expectation of a real function of the outcome.
    pub fn expect(&self, f: impl Fn(&K) -> f64) -> f64 {
        self.masses.iter().map(|(k, p)| p * f(k)).sum()
    }

    /// Pushforward along f, merging collided outcomes.
    pub fn map<L: Ord + Clone>(&self, f: impl Fn(&K) -> L) -> FiniteDistribution<L> {
        let mut out: BTreeMap<L, f64> = BTreeMap::new();
        for (k, p) in &self.masses {
            *out.entry(f(k)).or_insert(0.0) += *p;
        }
        FiniteDistribution { masses: out }
    }
}

/// Kullback–Leibler divergence D(μ‖ν) in nats; +∞ when μ charges a
/// ν-null outcome.
pub fn kl_divergence<K: Ord + Clone>(
    mu: &FiniteDistribution<K>,
    nu: &FiniteDistribution<K>,
) -> f64 {
    let mut sum = 0.0;
    for (key, p) in mu.masses() {
        let q = nu.mass(key);
        if q == 0.0 {
            return f64::INFINITY;
        }
        sum += p * (p / q).ln();
    }
    sum
}

/// The chi-square-like distance Σ (μ−ν)²/(μ+ν) over the union support.
pub fn dbtv<K: Ord + Clone>(mu: &FiniteDistribution<K>, nu: &FiniteDistribution<K>) -> f64 {
    let mut keys: Vec<&K> = mu.masses().keys().collect();
    keys.extend(nu.masses().keys());
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|k| {
            let p = mu.mass(k);
            let q = nu.mass(k);
            if p + q == 0.0 {
                0.0
            } else {
                (p - q) * (p - q) / (p + q)
            }
        })
        .sum()
}

/// Total variation distance ½ Σ |μ−ν|.
pub fn total_variation<K: Ord + Clone>(
    mu: &FiniteDistribution<K>,
    nu: &FiniteDistribution<K>,
) -> f64 {
    let mut keys: Vec<&K> = mu.masses().keys().collect();
    keys.extend(nu.masses().keys());
    keys.sort();
    keys.dedup();
    0.5 * keys
        .into_iter()
        .map(|k| (mu.mass(k) - nu.mass(k)).abs())
        .sum::<f64>()
}

/// A joint distribution on pairs, with marginals fixed at construction.
#[derive(Clone, Debug)]
pub struct JointDistribution<A: Ord + Clone, B: Ord + Clone> {
    joint: FiniteDistribution<(A, B)>,
    marginal_x: FiniteDistribution<A>,
    marginal_y: FiniteDistribution<B>,
}

impl<A: Ord + Clone, B: Ord + Clone> JointDistribution<A, B> {
    pub fn new(masses: impl IntoIterator<Item = ((A, B), f64)>) -> Result<Self> {
        let joint = FiniteDistribution::new(masses)?;
        let marginal_x = joint.map(|(a, _)| a.clone());
        let marginal_y = joint.map(|(_, b)| b.clone());
        Ok(JointDistribution {
            joint,
            marginal_x,
            marginal_y,
        })
    }

    pub fn independent(mu: &FiniteDistribution<A>, nu: &FiniteDistribution<B>) -> Self {
        let mut masses = BTreeMap::new();
        for (a, p) in mu.masses() {
            for (b, q) in nu.masses() {
                masses.insert((a.clone(), b.clone()), p * q);
            }
        }
        JointDistribution {
            joint: FiniteDistribution { masses },
            marginal_x: mu.clone(),
            marginal_y: nu.clone(),
        }
    }

    pub fn joint(&self) -> &FiniteDistribution<(A, B)> {
        &self.joint
    }

    pub fn marginal_x(&self) -> &FiniteDistribution<A> {
        &self.marginal_x
    }

    pub fn marginal_y(&self) -> &FiniteDistribution<B> {
        &self.marginal_y
    }

    /// I(X,Y) = H(X) + H(Y) − H(X,Y).
    pub fn mutual_information(&self) -> f64 {
        self.marginal_x.entropy() + self.marginal_y.entropy() - self.joint.entropy()
    }

    /// H(X|Y) = H(X,Y) − H(Y).
    pub fn conditional_entropy(&self) -> f64 {
        self.joint.entropy() - self.marginal_y.entropy()
    }

    /// The other textbook form I(X,Y) = H(X) − H(X|Y), for identity checks.
    pub fn mutual_information_via_conditional(&self) -> f64 {
        self.marginal_x.entropy() - self.conditional_entropy()
    }

    /// The conditional law of X given Y = y.
    pub fn conditional_given(&self, y: &B) -> Result<FiniteDistribution<A>> {
        let total = self.marginal_y.mass(y);
        if total == 0.0 {
            return Err(Error::InvalidParameter(
                "conditioning on a null outcome".into(),
            ));
        }
        let mut masses = BTreeMap::new();
        for ((a, b), p) in self.joint.masses() {
            if b == y {
                masses.insert(a.clone(), p / total);
            }
        }
        Ok(FiniteDistribution { masses })
    }
}
