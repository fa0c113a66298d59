//! Excursion-swap identity for the move-or-switch walk.
//!
//! Decompose a trajectory into the k excursions of the base between
//! consecutive visits to the origin (time 0 counts as the first
//! visit), condition on the event B = {at least one excursion moved
//! the base} ∩ {the base stays within the given radius up to the
//! (k+1)-th visit}, and let i be the last excursion of maximal height.
//! Replacing that excursion's step block by its reversed, inverted
//! block is a probability-preserving involution on B that keeps every
//! visit time and every excursion height, because step measures here
//! are symmetric and base distances depend only on |position|. The
//! endpoint of the modified trajectory is
//! `X(T_i) · V⁻¹ · X(T_{i+1})⁻¹ · X(T_{k+1})` with
//! `V = X(T_i)⁻¹ · X(T_{i+1})`,
//! so that expression has exactly the same conditional law as the
//! plain endpoint X(T_{k+1}). The exhaustive arm certifies this with
//! total variation exactly zero (all atom masses are dyadic, so the
//! accumulated sums match bit for bit); the Monte Carlo arm checks the
//! paired empirical laws at a sampling tolerance.

use crate::group::{identity, inverse, multiply, Element, GroupSpec};
use crate::rng::trial_stream;
use crate::walk::trajectory::{base_distance_from_origin, base_position};
use crate::walk::StepMeasure;
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize)]
pub struct SwapExhaustiveReport {
    pub group: String,
    pub k: u64,
    pub radius: u64,
    pub horizon: usize,
    /// Probability mass of trajectories satisfying B within the horizon.
    pub accepted_mass: f64,
    /// Number of distinct endpoints over that event.
    pub support: usize,
    /// Total variation between the endpoint law and the swapped law.
    pub total_variation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SwapMonteCarloReport {
    pub group: String,
    pub k: u64,
    pub radius: u64,
    pub attempts: u64,
    pub accepted: u64,
    pub support: usize,
    pub total_variation: f64,
    pub seed: u64,
}

const MAX_EXHAUSTIVE_NODES: f64 = 5e6;
const MIN_ACCEPTED: u64 = 100;

struct Walker {
    spec: GroupSpec,
    atoms: Vec<(Element, f64)>,
    inverse_atom: Vec<usize>,
    radius: u64,
    k: u64,
}

impl Walker {
    fn new(spec: &GroupSpec, k: u64, radius: u64) -> Result<Self> {
        if !matches!(spec, GroupSpec::Wreath(_, _)) {
            return Err(Error::Unsupported(format!(
                "excursion swap needs a wreath product, got {spec}"
            )));
        }
        if k == 0 || radius == 0 {
            return Err(Error::InvalidParameter(
                "need k ≥ 1 and radius ≥ 1".into(),
            ));
        }
        let (lamp_spec, base_spec) = match spec {
            GroupSpec::Wreath(l, b) => (l.as_ref(), b.as_ref()),
            _ => unreachable!(),
        };
        let measure = crate::walk::move_or_switch(
            &StepMeasure::uniform_on_generators(lamp_spec)?,
            &StepMeasure::uniform_on_generators(base_spec)?,
        )?;
        let atoms: Vec<(Element, f64)> = measure.atoms().to_vec();
        let mut inverse_atom = Vec::with_capacity(atoms.len());
        for (element, p) in &atoms {
            let inv = inverse(spec, element)?;
            let j = atoms
                .iter()
                .position(|(e, q)| *e == inv && *q == *p)
                .ok_or_else(|| {
                    Error::InvalidMeasure("step measure is not symmetric".into())
                })?;
            inverse_atom.push(j);
        }
        Ok(Self {
            spec: spec.clone(),
            atoms,
            inverse_atom,
            radius,
            k,
        })
    }

    /// Run one step sequence from the identity. Returns the elements at
    /// the origin-visit times (T_1 = 0 through T_{k+1}), the excursion
    /// heights, and the index just past the last consumed step — or
    /// None if the walk leaves the radius ball or runs out of steps
    /// before the (k+1)-th visit.
    fn replay(&self, steps: &[usize]) -> Option<(Vec<Element>, Vec<u64>, usize)> {
        let mut state = identity(&self.spec);
        let mut visit_elements = vec![state.clone()];
        let mut heights = Vec::new();
        let mut current_height = 0u64;
        for (t, &index) in steps.iter().enumerate() {
            state = multiply(&self.spec, &state, &self.atoms[index].0)
                .expect("atoms stay in the group");
            let distance = base_distance_from_origin(base_position(&state));
            if distance > self.radius {
                return None;
            }
            current_height = current_height.max(distance);
            if distance == 0 {
                heights.push(current_height);
                current_height = 0;
                visit_elements.push(state.clone());
                if visit_elements.len() as u64 == self.k + 1 {
                    return Some((visit_elements, heights, t + 1));
                }
            }
        }
        None
    }

    /// Endpoint of the trajectory with the last highest excursion
    /// reversed and inverted, computed from the visit elements alone.
    fn swapped_endpoint(&self, visits: &[Element], heights: &[u64]) -> Result<Element> {
        let max = *heights.iter().max().expect("at least one excursion");
        let i = heights.iter().rposition(|&h| h == max).expect("nonempty");
        let before = &visits[i];
        let after = &visits[i + 1];
        let end = visits.last().expect("endpoint present");
        // before · V⁻¹ · after⁻¹ · end with V = before⁻¹ · after.
        let v = multiply(&self.spec, &inverse(&self.spec, before)?, after)?;
        let head = multiply(&self.spec, before, &inverse(&self.spec, &v)?)?;
        let tail = multiply(&self.spec, &inverse(&self.spec, after)?, end)?;
        multiply(&self.spec, &head, &tail)
    }
}

fn total_variation_of(
    mu: &BTreeMap<Element, f64>,
    nu: &BTreeMap<Element, f64>,
) -> f64 {
    let mut tv = 0.0;
    for (key, p) in mu {
        tv += (p - nu.get(key).copied().unwrap_or(0.0)).abs();
    }
    for (key, q) in nu {
        if !mu.contains_key(key) {
            tv += q.abs();
        }
    }
    tv / 2.0
}

/// Enumerate every step sequence up to `horizon` steps, restrict to the
/// event B, and compare the endpoint law with the swapped-endpoint law.
/// Every accepted trajectory is also re-run with the excursion block
/// explicitly reversed and inverted, and the visit times, heights, and
/// endpoint of the rebuilt trajectory are checked against the formula.
pub fn excursion_swap_exhaustive(
    spec: &GroupSpec,
    k: u64,
    radius: u64,
    horizon: usize,
) -> Result<SwapExhaustiveReport> {
    let walker = Walker::new(spec, k, radius)?;
    let node_estimate = (walker.atoms.len() as f64).powi(horizon as i32);
    if node_estimate > MAX_EXHAUSTIVE_NODES {
        return Err(Error::CapExceeded(format!(
            "about {node_estimate:.0} step sequences; shrink the horizon"
        )));
    }
    if (horizon as u64) < k {
        return Err(Error::InvalidParameter(
            "horizon is shorter than the number of excursions".into(),
        ));
    }

    let mut mu: BTreeMap<Element, f64> = BTreeMap::new();
    let mut nu: BTreeMap<Element, f64> = BTreeMap::new();
    let mut steps: Vec<usize> = Vec::with_capacity(horizon);
    dfs(&walker, horizon, &mut steps, 1.0, &mut mu, &mut nu)?;

    let accepted_mass: f64 = mu.values().sum();
    if accepted_mass == 0.0 {
        return Err(Error::InvalidParameter(
            "the event has zero mass within this horizon".into(),
        ));
    }
    Ok(SwapExhaustiveReport {
        group: spec.to_string(),
        k,
        radius,
        horizon,
        accepted_mass,
        support: mu.len(),
        total_variation: total_variation_of(&mu, &nu),
    })
}

fn dfs(
    walker: &Walker,
    horizon: usize,
    steps: &mut Vec<usize>,
    prob: f64,
    mu: &mut BTreeMap<Element, f64>,
    nu: &mut BTreeMap<Element, f64>,
) -> Result<()> {
    // Replaying the prefix at every node would square the cost; instead
    // extend depth-first and only replay full candidate trajectories.
    if let Some((visits, heights, consumed)) = walker.replay(steps) {
        debug_assert_eq!(consumed, steps.len());
        if heights.iter().any(|&h| h > 0) {
            let endpoint = visits.last().expect("endpoint").clone();
            let swapped = walker.swapped_endpoint(&visits, &heights)?;
            verify_involution(walker, steps, &heights, &swapped)?;
            *mu.entry(endpoint).or_insert(0.0) += prob;
            *nu.entry(swapped).or_insert(0.0) += prob;
        }
        return Ok(());
    }
    if steps.len() == horizon {
        return Ok(());
    }
    // Prune branches that already left the ball.
    if !steps.is_empty() && prefix_escaped(walker, steps) {
        return Ok(());
    }
    for index in 0..walker.atoms.len() {
        steps.push(index);
        let p = walker.atoms[index].1;
        dfs(walker, horizon, steps, prob * p, mu, nu)?;
        steps.pop();
    }
    Ok(())
}

fn prefix_escaped(walker: &Walker, steps: &[usize]) -> bool {
    let mut state = identity(&walker.spec);
    for &index in steps {
        state = multiply(&walker.spec, &state, &walker.atoms[index].0)
            .expect("atoms stay in the group");
        if base_distance_from_origin(base_position(&state)) > walker.radius {
            return true;
        }
    }
    false
}

/// Rebuild the swapped trajectory step by step and check that it has
/// the same visit times, the same excursion heights, the same maximal
/// excursion index, the same probability, and the endpoint predicted
/// by the formula.
fn verify_involution(
    walker: &Walker,
    steps: &[usize],
    heights: &[u64],
    swapped: &Element,
) -> Result<()> {
    let max = *heights.iter().max().expect("nonempty");
    let i = heights.iter().rposition(|&h| h == max).expect("nonempty");
    // Visit times are recoverable by replaying: collect them directly.
    let mut visit_times = vec![0usize];
    {
        let mut state = identity(&walker.spec);
        for (t, &index) in steps.iter().enumerate() {
            state = multiply(&walker.spec, &state, &walker.atoms[index].0)?;
            if base_distance_from_origin(base_position(&state)) == 0 {
                visit_times.push(t + 1);
            }
        }
    }
    let (a, b) = (visit_times[i], visit_times[i + 1]);
    let mut rebuilt: Vec<usize> = steps.to_vec();
    for (offset, slot) in rebuilt[a..b].iter_mut().enumerate() {
        *slot = walker.inverse_atom[steps[b - 1 - offset]];
    }
    let (new_visits, new_heights, consumed) = walker
        .replay(&rebuilt)
        .ok_or_else(|| Error::Numeric("swapped trajectory left the event".into()))?;
    // The block is permuted, so compare the probability products; every
    // atom mass is a power of two, so the products are exact in f64 and
    // equality is bit-for-bit.
    let product = |indices: &[usize]| -> f64 {
        indices.iter().map(|&x| walker.atoms[x].1).product()
    };
    let same_probability = product(&rebuilt) == product(steps);
    let new_max = *new_heights.iter().max().expect("nonempty");
    let new_i = new_heights.iter().rposition(|&h| h == new_max).expect("nonempty");
    if consumed != steps.len()
        || new_heights != heights
        || new_i != i
        || !same_probability
        || new_visits.last() != Some(swapped)
    {
        return Err(Error::Numeric(format!(
            "excursion swap involution invariants failed: steps {steps:?}, rebuilt {rebuilt:?}, \
             heights {heights:?} vs {new_heights:?}, i {i} vs {new_i}, consumed {consumed} of {}, \
             same probability {same_probability}, endpoint {:?} vs formula {swapped:?}",
            steps.len(),
            new_visits.last(),
        )));
    }
    Ok(())
}

/// Monte Carlo version of the same comparison: sample trajectories,
/// keep those in B, and compare the empirical endpoint law with the
/// empirical swapped law.
pub fn excursion_swap_monte_carlo(
    spec: &GroupSpec,
    k: u64,
    radius: u64,
    attempts: u64,
    seed: u64,
) -> Result<SwapMonteCarloReport> {
    let walker = Walker::new(spec, k, radius)?;
    if attempts == 0 {
        return Err(Error::InvalidParameter("need attempts ≥ 1".into()));
    }
    let pairs: Vec<(Element, Element)> = (0..attempts)
        .into_par_iter()
        .filter_map(|trial| {
            let mut rng = trial_stream(seed, trial);
            let mut state = identity(&walker.spec);
            let mut visits = vec![state.clone()];
            let mut heights = Vec::new();
            let mut current_height = 0u64;
            loop {
                let u: f64 = rand::Rng::random(&mut rng);
                let mut cumulative = 0.0;
                let mut chosen = walker.atoms.len() - 1;
                for (index, (_, p)) in walker.atoms.iter().enumerate() {
                    cumulative += p;
                    if u < cumulative {
                        chosen = index;
                        break;
                    }
                }
                state = multiply(&walker.spec, &state, &walker.atoms[chosen].0)
                    .expect("atoms stay in the group");
                let distance = base_distance_from_origin(base_position(&state));
                if distance > walker.radius {
                    return None;
                }
                current_height = current_height.max(distance);
                if distance == 0 {
                    heights.push(current_height);
                    current_height = 0;
                    visits.push(state.clone());
                    if visits.len() as u64 == walker.k + 1 {
                        break;
                    }
                }
            }
            if heights.iter().all(|&h| h == 0) {
                return None;
            }
            let endpoint = visits.last().expect("endpoint").clone();
            let swapped = walker
                .swapped_endpoint(&visits, &heights)
                .expect("formula applies");
            Some((endpoint, swapped))
        })
        .collect();
    let accepted = pairs.len() as u64;
    if accepted < MIN_ACCEPTED {
        return Err(Error::InvalidParameter(format!(
            "only {accepted} accepted trials (need at least {MIN_ACCEPTED}); raise attempts"
        )));
    }
    let mut mu: BTreeMap<Element, f64> = BTreeMap::new();
    let mut nu: BTreeMap<Element, f64> = BTreeMap::new();
    let weight = 1.0 / accepted as f64;
    for (endpoint, swapped) in &pairs {
        *mu.entry(endpoint.clone()).or_insert(0.0) += weight;
        *nu.entry(swapped.clone()).or_insert(0.0) += weight;
    }
    let support = mu.len().max(nu.len());
    Ok(SwapMonteCarloReport {
        group: spec.to_string(),
        k,
        radius,
        attempts,
        accepted,
        support,
        total_variation: total_variation_of(&mu, &nu),
        seed,
    })
}
