//! Conditional-entropy lower bound for walks on lamp ≀ base, plus a
//! crude but valid upper envelope, both estimated from sampled base
//! profiles.
//!
//! Conditioned on the base trajectory, the lamp at a site that the
//! walk launched j steps from is distributed as j steps of the lazy(½)
//! walk on the lamp group, independently across sites. Summing those
//! entropies and averaging over trajectories therefore lower-bounds
//! the entropy of the full walk at time n.

use crate::group::{identity, multiply, Element, GroupSpec};
use crate::growth::profile::lazy_base_profile;
use crate::rng::trial_stream;
use crate::stats::mean_and_stderr;
use crate::walk::StepMeasure;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// Exact entropies H(Y_j) of the lazy(½) lamp walk, extended on demand.
pub struct LampEntropyTable {
    atoms: Vec<(Element, f64)>,
    spec: GroupSpec,
    current: BTreeMap<Element, f64>,
    entropies: Vec<f64>,
    support_cap: usize,
}

impl LampEntropyTable {
    pub fn new(lamp: &GroupSpec, support_cap: usize) -> Result<Self> {
        let lazy = StepMeasure::uniform_on_generators(lamp)?.lazy(0.5)?;
        let mut current = BTreeMap::new();
        current.insert(identity(lamp), 1.0);
        Ok(Self {
            atoms: lazy.atoms().to_vec(),
            spec: lamp.clone(),
            current,
            entropies: vec![0.0],
            support_cap,
        })
    }

    /// H(Y_j), convolving further if the table is too short.
    pub fn entropy_at(&mut self, j: u64) -> Result<f64> {
        while self.entropies.len() <= j as usize {
            let mut next: BTreeMap<Element, f64> = BTreeMap::new();
            for (element, mass) in &self.current {
                for (atom, p) in &self.atoms {
                    let product = multiply(&self.spec, element, atom)?;
                    *next.entry(product).or_insert(0.0) += mass * p;
                }
            }
            if next.len() > self.support_cap {
                return Err(Error::CapExceeded(format!(
                    "lamp entropy table needs support {} at step {}, cap is {}",
                    next.len(),
                    self.entropies.len(),
                    self.support_cap
                )));
            }
            let entropy = next
                .values()
                .filter(|p| **p > 0.0)
                .map(|p| -p * p.ln())
                .sum();
            self.entropies.push(entropy);
            self.current = next;
        }
        Ok(self.entropies[j as usize])
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LowerBoundEstimate {
    pub n: u64,
    pub trials: u64,
    /// Monte Carlo mean of Σ_z H(Y_{steps launched from z}).
    pub mean: f64,
    pub stderr: f64,
}

/// Estimate E[Σ_z H(Y_{K(z)})] over `trials` sampled base profiles —
/// a lower bound on the entropy of the wreath walk at time n.
pub fn conditional_entropy_lower_bound(
    lamp: &GroupSpec,
    base: &GroupSpec,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<LowerBoundEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need trials ≥ 1".into()));
    }
    let mut table = LampEntropyTable::new(lamp, 4_000_000)?;
    let mut sums = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let profile = lazy_base_profile(base, n, &mut trial_stream(seed, trial))?;
        let mut sum = 0.0;
        for site in profile.counts().keys() {
            sum += table.entropy_at(profile.steps_launched_from(site))?;
        }
        sums.push(sum);
    }
    let (mean, stderr) = mean_and_stderr(&sums);
    Ok(LowerBoundEstimate {
        n,
        trials,
        mean,
        stderr,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct UpperBoundEstimate {
    pub n: u64,
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
}

/// Fixed polyominoes number at most c·4.65^s (Klarner–Rivest), so a
/// connected visited range of size s containing the origin costs at
/// most s·ln 4.65 + O(ln s) nats to describe.
const RANGE_GROWTH: f64 = 4.65;

/// A crude but valid entropy upper envelope for the two-element-lamp
/// wreath walk: describe the visited range (a connected set containing
/// the origin), the position inside it, and one lamp bit per site.
pub fn entropy_upper_envelope(
    base: &GroupSpec,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<UpperBoundEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need trials ≥ 1".into()));
    }
    let mut costs = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let profile = lazy_base_profile(base, n, &mut trial_stream(seed, trial))?;
        let sites = profile.distinct_sites() as f64;
        let cost = sites * (std::f64::consts::LN_2 + RANGE_GROWTH.ln())
            + 2.0 * ((n + 2) as f64).ln()
            + (sites + 1.0).ln();
        costs.push(cost);
    }
    let (mean, stderr) = mean_and_stderr(&costs);
    Ok(UpperBoundEstimate {
        n,
        trials,
        mean,
        stderr,
    })
}

/// Mean number of sites whose occupation count reaches `threshold`,
/// with its standard error.
pub fn mean_rich_sites(
    base: &GroupSpec,
    n: u64,
    threshold: u64,
    trials: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need trials ≥ 1".into()));
    }
    let mut counts = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let profile = lazy_base_profile(base, n, &mut trial_stream(seed, trial))?;
        counts.push(profile.sites_with_at_least(threshold) as f64);
    }
    Ok(mean_and_stderr(&counts))
}

/// True when the lamp group makes H(Y_j) equal ln 2 for every j ≥ 1:
/// the lazy(½) two-element lamp is exactly uniform after one step.
pub fn two_element_lamp(lamp: &GroupSpec) -> bool {
    matches!(lamp, GroupSpec::CyclicTwo)
}
