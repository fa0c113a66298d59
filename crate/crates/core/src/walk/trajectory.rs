//! Seeded trajectory sampling and stopping times.

use super::measure::StepMeasure;
use crate::group::{identity, is_identity, multiply, validate, Element};
use crate::rng::stream;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// A sampled walk: states X_0..X_n and the atoms that produced them.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<Element>,
    pub steps: Vec<Element>,
    pub seed: u64,
}

/// Sample an n-step walk started at `start`, multiplying atoms on the
/// right. Deterministic in (measure, start, n, seed).
pub fn sample_trajectory(
    measure: &StepMeasure,
    start: &Element,
    n: usize,
    seed: u64,
) -> Result<Trajectory> {
    validate(measure.spec(), start)?;
    let mut rng = stream(seed);
    let mut states = Vec::with_capacity(n + 1);
    let mut steps = Vec::with_capacity(n);
    states.push(start.clone());
    for _ in 0..n {
        let step = measure.sample(&mut rng).clone();
        let next = multiply(measure.spec(), states.last().unwrap(), &step)?;
        states.push(next);
        steps.push(step);
    }
    Ok(Trajectory {
        states,
        steps,
        seed,
    })
}

/// The base position of a state: the outer position for wreath elements,
/// the element itself on a lattice.
pub fn base_position(state: &Element) -> &Element {
    match state {
        Element::Wreath(w) => &w.position,
        other => other,
    }
}

/// Word distance of a lattice point from the origin.
pub fn base_distance_from_origin(position: &Element) -> u64 {
    match position {
        Element::Line(n) => n.unsigned_abs(),
        Element::Grid(x, y) => x.unsigned_abs() + y.unsigned_abs(),
        Element::Bit(b) => *b as u64,
        Element::Wreath(_) => unreachable!("base positions are lattice points"),
    }
}

/// Return times and exit times observed along one trajectory.
#[derive(Clone, Debug)]
pub struct StoppingRecord {
    /// `t[k-1]` = T_k, the least t with #{j ≤ t : base(X_j) = origin} ≥ k;
    /// `None` when not reached before the horizon.
    pub t: Vec<Option<usize>>,
    /// E(r) = least t with base distance > r, per requested radius.
    pub e: BTreeMap<u64, Option<usize>>,
    pub horizon: usize,
}

/// Scan a trajectory for T_1..T_k_max and E(r) for each radius.
pub fn stopping_times(traj: &Trajectory, k_max: usize, radii: &[u64]) -> Result<StoppingRecord> {
    if traj.states.is_empty() {
        return Err(Error::InvalidParameter("empty trajectory".into()));
    }
    let mut t = vec![None; k_max];
    let mut e: BTreeMap<u64, Option<usize>> = radii.iter().map(|r| (*r, None)).collect();
    let mut visits = 0usize;
    for (time, state) in traj.states.iter().enumerate() {
        let position = base_position(state);
        if is_identity(position) {
            visits += 1;
            if visits <= k_max {
                t[visits - 1] = Some(time);
            }
        }
        let distance = base_distance_from_origin(position);
        for (radius, slot) in e.iter_mut() {
            if slot.is_none() && distance > *radius {
                *slot = Some(time);
            }
        }
    }
    Ok(StoppingRecord {
        t,
        e,
        horizon: traj.states.len() - 1,
    })
}

/// Start element: the identity of the measure's group.
pub fn identity_start(measure: &StepMeasure) -> Element {
    identity(measure.spec())
}
