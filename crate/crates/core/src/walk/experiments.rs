//! Monte Carlo experiments: escape-before-hitting probabilities against
//! the kernel prediction, exit-time tails, and stopped-value checks for
//! harmonic functions.

use crate::group::{multiply, Element};
use crate::harmonic::{lamp_override, HarmonicFunction};
use crate::kernel::{kappa, potential_kernel};
use crate::rng::trial_stream;
use crate::stats::{bernoulli_stderr, linear_fit};
use crate::walk::trajectory::{base_distance_from_origin, base_position};
use crate::walk::StepMeasure;
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

/// Escape-before-hitting estimate on the grid, with the potential-kernel
/// prediction it is compared against.
#[derive(Clone, Debug, Serialize)]
pub struct HittingReport {
    pub target: (i64, i64),
    pub radius: f64,
    pub trials: u64,
    /// Fraction of walks that left the disk before visiting the target.
    pub escape_estimate: f64,
    pub stderr: f64,
    /// a(target) / ((2/π) ln r + κ).
    pub predicted: f64,
    pub seed: u64,
}

/// Probability that the simple grid walk started at the origin exits
/// the Euclidean disk of the given radius before hitting `target`.
///
/// Stopping the kernel martingale at this time gives the prediction
/// a(target) / ((2/π) ln r + κ) up to O(|target|/r) boundary error.
pub fn escape_before_hitting(
    target: (i64, i64),
    radius: f64,
    trials: u64,
    seed: u64,
) -> Result<HittingReport> {
    let norm = ((target.0 * target.0 + target.1 * target.1) as f64).sqrt();
    if norm == 0.0 || norm >= radius {
        return Err(Error::InvalidParameter(format!(
            "target must satisfy 0 < |target| < radius, got |target| = {norm}, radius = {radius}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let radius_squared = radius * radius;
    let escapes: u64 = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_stream(seed, trial);
            let (mut x, mut y) = (0i64, 0i64);
            loop {
                let u: f64 = rand::Rng::random(&mut rng);
                if u < 0.25 {
                    x += 1;
                } else if u < 0.5 {
                    x -= 1;
                } else if u < 0.75 {
                    y += 1;
                } else {
                    y -= 1;
                }
                if (x, y) == target {
                    return 0u64;
                }
                if (x * x + y * y) as f64 >= radius_squared {
                    return 1u64;
                }
            }
        })
        .sum();
    let escape_estimate = escapes as f64 / trials as f64;
    let kernel_at_target = potential_kernel(target.0, target.1, 1e-10)?;
    let predicted = kernel_at_target / ((2.0 / std::f64::consts::PI) * radius.ln() + kappa());
    Ok(HittingReport {
        target,
        radius,
        trials,
        escape_estimate,
        stderr: bernoulli_stderr(escape_estimate, trials),
        predicted,
        seed,
    })
}

/// Tail of the exit time E(r) of a walk's base from the ball of radius
/// `radius`, sampled at evenly spaced checkpoints.
#[derive(Clone, Debug, Serialize)]
pub struct ExitTailReport {
    pub radius: u64,
    pub trials: u64,
    /// (t, fraction of walks with E(r) > t), one per checkpoint.
    pub survival: Vec<(u64, f64)>,
    /// Log-linear fit of ln(survival) against t.
    pub slope: f64,
    pub r_squared: f64,
    pub seed: u64,
}

/// Sample E(r) = first time the base leaves the radius-`radius` ball
/// for the given step measure, and record the survival function at
/// `checkpoints` evenly spaced multiples of `spacing`.
pub fn exit_time_tail(
    measure: &StepMeasure,
    radius: u64,
    trials: u64,
    checkpoints: usize,
    spacing: u64,
    seed: u64,
) -> Result<ExitTailReport> {
    if trials == 0 || checkpoints < 2 || checkpoints > 60 || spacing == 0 {
        return Err(Error::InvalidParameter(
            "need trials ≥ 1, 2 ≤ checkpoints ≤ 60, spacing ≥ 1".into(),
        ));
    }
    let horizon = spacing * checkpoints as u64;
    let spec = measure.spec().clone();
    let counts: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_stream(seed, trial);
            let mut state = crate::group::identity(&spec);
            let mut exit: Option<u64> = None;
            for t in 1..=horizon {
                state = multiply(&spec, &state, measure.sample(&mut rng))
                    .expect("atoms stay in the group");
                if base_distance_from_origin(base_position(&state)) > radius {
                    exit = Some(t);
                    break;
                }
            }
            let exit = exit.unwrap_or(u64::MAX);
            // Bit k set when E(r) > checkpoint k.
            let mut survived = 0u64;
            for k in 0..checkpoints {
                if exit > spacing * (k as u64 + 1) {
                    survived |= 1 << k;
                }
            }
            survived
        })
        .collect();
    let mut survival = Vec::with_capacity(checkpoints);
    for k in 0..checkpoints {
        let alive = counts.iter().filter(|bits| *bits & (1 << k) != 0).count();
        survival.push((spacing * (k as u64 + 1), alive as f64 / trials as f64));
    }
    let data: Vec<(f64, f64)> = survival
        .iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|(t, p)| (*t as f64, p.ln()))
        .collect();
    let fit = linear_fit(&data)?;
    Ok(ExitTailReport {
        radius,
        trials,
        survival,
        slope: fit.slope,
        r_squared: fit.r_squared,
        seed,
    })
}

/// Monte Carlo mean of h(X_τ), τ = min(k-th return of the base to the
/// origin at a time ≥ 1, first exit from the radius-r ball).
#[derive(Clone, Debug, Serialize)]
pub struct StoppedValueReport {
    pub k: u64,
    pub radius: u64,
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
    pub h_at_start: f64,
    pub seed: u64,
}

/// Estimate E_x[h(X_τ)]. For h harmonic and τ as above, optional
/// stopping makes this h(x). When `override_lamp` is given, the lamp at
/// that point is forced to that value before evaluating h, which turns
/// the estimator into the building block for stopped-and-corrected
/// functions.
pub fn stopped_value_expectation(
    h: &HarmonicFunction,
    start: &Element,
    k: u64,
    radius: u64,
    trials: u64,
    seed: u64,
    override_lamp: Option<(&Element, &Element)>,
) -> Result<StoppedValueReport> {
    if trials == 0 || k == 0 {
        return Err(Error::InvalidParameter(
            "need trials ≥ 1 and k ≥ 1".into(),
        ));
    }
    let measure = h.measure();
    let spec = measure.spec().clone();
    crate::group::validate(&spec, start)?;
    if base_distance_from_origin(base_position(start)) > radius {
        return Err(Error::InvalidParameter(
            "start lies outside the stopping ball".into(),
        ));
    }
    let h_at_start = h.evaluate(start)?;
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<f64> {
            let mut rng = trial_stream(seed, trial);
            let mut state = start.clone();
            let mut returns = 0u64;
            loop {
                state = multiply(&spec, &state, measure.sample(&mut rng))?;
                let position = base_position(&state);
                let distance = base_distance_from_origin(position);
                if distance > radius {
                    break;
                }
                if distance == 0 {
                    returns += 1;
                    if returns >= k {
                        break;
                    }
                }
            }
            let observed = match override_lamp {
                Some((point, value)) => lamp_override(&spec, &state, point, value)?,
                None => state,
            };
            h.evaluate(&observed)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean, stderr) = crate::stats::mean_and_stderr(&values);
    Ok(StoppedValueReport {
        k,
        radius,
        trials,
        mean,
        stderr,
        h_at_start,
        seed,
    })
}
