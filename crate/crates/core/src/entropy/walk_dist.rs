//! Exact time-n walk distributions by repeated convolution.

use super::dist::FiniteDistribution;
use crate::group::{identity, multiply, Element};
use crate::walk::StepMeasure;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Default ceiling on enumerated support sizes.
pub const DEFAULT_SUPPORT_CAP: usize = 2_000_000;

/// Convolve the point mass at the identity `n` times with the step
/// measure. Errors when the support would exceed `support_cap`.
pub fn exact_walk_distribution(
    measure: &StepMeasure,
    n: usize,
    support_cap: usize,
) -> Result<FiniteDistribution<Element>> {
    let mut current: BTreeMap<Element, f64> =
        [(identity(measure.spec()), 1.0)].into();
    for _ in 0..n {
        current = convolve_step(measure, &current, support_cap)?;
    }
    FiniteDistribution::new(current)
}

fn convolve_step(
    measure: &StepMeasure,
    current: &BTreeMap<Element, f64>,
    support_cap: usize,
) -> Result<BTreeMap<Element, f64>> {
    let mut next: BTreeMap<Element, f64> = BTreeMap::new();
    for (state, p) in current {
        for (atom, q) in measure.atoms() {
            let landed = multiply(measure.spec(), state, atom)?;
            *next.entry(landed).or_insert(0.0) += p * q;
            if next.len() > support_cap {
                return Err(Error::CapExceeded(format!(
                    "walk support exceeds cap {support_cap}"
                )));
            }
        }
    }
    Ok(next)
}

/// Exact entropies H(X_0..X_n) and their increments.
#[derive(Clone, Debug)]
pub struct EntropySequence {
    /// entropies[k] = H(X_k), k = 0..=n_max.
    pub entropies: Vec<f64>,
    /// increments[k-1] = H(X_k) − H(X_{k−1}).
    pub increments: Vec<f64>,
}

pub fn entropy_sequence(
    measure: &StepMeasure,
    n_max: usize,
    support_cap: usize,
) -> Result<EntropySequence> {
    let mut current: BTreeMap<Element, f64> =
        [(identity(measure.spec()), 1.0)].into();
    let mut entropies = vec![0.0];
    for _ in 0..n_max {
        current = convolve_step(measure, &current, support_cap)?;
        let h: f64 = -current
            .values()
            .map(|p| if *p > 0.0 { p * p.ln() } else { 0.0 })
            .sum::<f64>();
        entropies.push(h);
    }
    let increments = entropies.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(EntropySequence {
        entropies,
        increments,
    })
}

impl EntropySequence {
    /// Largest increase between consecutive increments (≤ tol for a
    /// genuinely nonincreasing sequence).
    pub fn max_increment_increase(&self) -> f64 {
        self.increments
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0f64, f64::max)
    }

    /// Worst violation of n·ΔH(n) ≤ H(X_n) over 1 ≤ n ≤ n_max.
    pub fn max_n_delta_excess(&self) -> f64 {
        self.increments
            .iter()
            .enumerate()
            .map(|(i, delta)| (i as f64 + 1.0) * delta - self.entropies[i + 1])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// √(n / H(X_n)) for n ≥ 1: the harmonic-growth lower-bound curve
/// induced by an entropy sequence.
pub fn harmonic_growth_lower_curve(entropies: &[f64]) -> Result<Vec<f64>> {
    entropies
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, h)| {
            if *h > 0.0 {
                Ok((n as f64 / h).sqrt())
            } else {
                Err(Error::InvalidParameter(format!(
                    "nonpositive entropy {h} at n = {n}"
                )))
            }
        })
        .collect()
}
