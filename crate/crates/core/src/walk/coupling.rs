//! The gluing coupling behind the linear-growth lower bound.
//!
//! Two walkers on `C2 wr Z` start in states that differ exactly in the
//! lamp at the origin; each performs the lazy move-or-switch walk with
//! step law (lazy ¼, switch ¼, left ¼, right ¼). The coupling gives both
//! walkers the same move whenever the difference cannot be repaired, and
//! while both sit at base 0 it pairs (switch, lazy) and (lazy, switch) —
//! each with probability ¼ — so every visit to the origin glues the pair
//! with probability ½. The estimated quantity is the chance the common
//! base position reaches ±r while the lamps still differ.
//!
//! Only the base position and the glued flag matter for that event, so
//! the Monte Carlo runs on the reduced chain; a full group-element
//! simulation driven by the same uniforms backs it in tests, and a dense
//! absorbing-chain solve provides exact values.

use crate::rng::trial_stream;
use crate::stats::bernoulli_stderr;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;

/// Outcome of the coupled experiment at one radius.
#[derive(Clone, Copy, Debug)]
pub struct CouplingReport {
    pub radius: u64,
    pub trials: u64,
    /// Fraction of trials reaching base position ±radius before gluing.
    pub estimate: f64,
    pub stderr: f64,
}

/// One reduced-chain trial: walk the base position with the glue flag
/// until |position| = r (escape) or the pair glues. The uniform-variate
/// mapping is fixed: at the origin [0,½) glues and [½,¾)/[¾,1) move
/// left/right; elsewhere [0,½) holds and [½,¾)/[¾,1) move.
fn reduced_trial<R: Rng + ?Sized>(r: i64, rng: &mut R) -> bool {
    let mut position = 0i64;
    loop {
        let u: f64 = rng.random();
        if position == 0 {
            if u < 0.5 {
                return false;
            }
            position = if u < 0.75 { -1 } else { 1 };
        } else if u >= 0.5 {
            position += if u < 0.75 { -1 } else { 1 };
        }
        if position.abs() >= r {
            return true;
        }
    }
}

/// Monte Carlo estimate of the escape-before-gluing probability.
pub fn coupled_gluing_experiment(radius: u64, trials: u64, seed: u64) -> Result<CouplingReport> {
    if radius == 0 || trials == 0 {
        return Err(Error::InvalidParameter(
            "coupling needs radius ≥ 1 and trials ≥ 1".into(),
        ));
    }
    let escapes: u64 = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_stream(seed, trial);
            reduced_trial(radius as i64, &mut rng) as u64
        })
        .sum();
    let estimate = escapes as f64 / trials as f64;
    Ok(CouplingReport {
        radius,
        trials,
        estimate,
        stderr: bernoulli_stderr(estimate, trials),
    })
}

/// Exact escape probability from the dense absorbing-chain system. The
/// transient states are the positions −(r−1)..r−1; from the origin the
/// chain glues with probability ½ and moves ±1 with ¼ each, elsewhere it
/// holds with ½ and moves with ¼ each; hitting ±r escapes.
pub fn exact_escape_probability(radius: u64) -> Result<f64> {
    if radius == 0 {
        return Err(Error::InvalidParameter("radius must be ≥ 1".into()));
    }
    let r = radius as i64;
    let size = (2 * r - 1) as usize;
    let index = |p: i64| (p + r - 1) as usize;
    let mut system = DMatrix::<f64>::identity(size, size);
    let mut reward = DVector::<f64>::zeros(size);
    for p in -(r - 1)..=(r - 1) {
        let row = index(p);
        let hold = if p == 0 { 0.0 } else { 0.5 };
        if hold > 0.0 {
            system[(row, row)] -= hold;
        }
        for neighbor in [p - 1, p + 1] {
            if neighbor.abs() >= r {
                reward[row] += 0.25;
            } else {
                system[(row, index(neighbor))] -= 0.25;
            }
        }
    }
    let solution = system
        .lu()
        .solve(&reward)
        .ok_or_else(|| Error::Numeric("absorbing-chain system is singular".into()))?;
    Ok(solution[index(0)])
}
