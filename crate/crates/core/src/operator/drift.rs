//! Monte Carlo drift of a test function under the lazy nearest-
//! neighbour walk on the integers: (E ψ(X_t) − ψ(0)) / t.

use crate::rng::trial_stream;
use crate::stats::mean_and_stderr;
use crate::{Error, Result};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DriftEstimate {
    pub t: u64,
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
}

/// Estimate (E ψ(X_t) − ψ(0)) / t for the walk that stays put with
/// probability ½ and otherwise moves ±1 uniformly. The test function
/// may fail (for example a lookup table hit outside its range); the
/// first failure aborts the estimate.
pub fn laplacian_drift_estimate<F>(
    psi: F,
    t: u64,
    trials: u64,
    seed: u64,
) -> Result<DriftEstimate>
where
    F: Fn(i64) -> Result<f64> + Sync,
{
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    if trials < 2 {
        return Err(Error::InvalidParameter(
            "need at least 2 trials for a standard error".into(),
        ));
    }
    let origin_value = psi(0)?;
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_stream(seed, trial);
            let mut position: i64 = 0;
            for _ in 0..t {
                let u: f64 = rng.random();
                if u >= 0.5 {
                    position += if u < 0.75 { 1 } else { -1 };
                }
            }
            Ok((psi(position)? - origin_value) / t as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean, stderr) = mean_and_stderr(&samples);
    Ok(DriftEstimate {
        t,
        trials,
        mean,
        stderr,
    })
}

/// Wrap a lookup table as a test function defined on
/// [min_argument, min_argument + len): arguments outside error out.
pub fn tabulated_function(
    table: Vec<f64>,
    min_argument: i64,
) -> impl Fn(i64) -> Result<f64> + Sync {
    move |x: i64| {
        let index = x
            .checked_sub(min_argument)
            .filter(|&i| i >= 0 && (i as usize) < table.len());
        match index {
            Some(i) => Ok(table[i as usize]),
            None => Err(Error::OutOfRange(format!(
                "argument {x} outside the tabulated range [{}, {}]",
                min_argument,
                min_argument + table.len() as i64 - 1
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_function_has_zero_drift() {
        let estimate =
            laplacian_drift_estimate(|x| Ok(x as f64), 200, 4000, 1201).unwrap();
        assert!(
            estimate.mean.abs() <= 4.0 * estimate.stderr,
            "mean {} vs stderr {}",
            estimate.mean,
            estimate.stderr
        );
    }

    #[test]
    fn quadratic_drift_equals_the_step_variance() {
        // Each step has variance ½, so E X_t² = t/2 and the drift of
        // x² is ½ exactly in expectation.
        let estimate =
            laplacian_drift_estimate(|x| Ok((x * x) as f64), 400, 6000, 1301).unwrap();
        assert!(
            (estimate.mean - 0.5).abs() <= 4.0 * estimate.stderr,
            "mean {} ± {}",
            estimate.mean,
            estimate.stderr
        );
        assert!(estimate.stderr < 0.02);
    }

    #[test]
    fn absolute_value_drift_decays_like_the_central_limit_profile() {
        // E |X_t| ≈ sqrt(t/π) for large t, so the drift ≈ 1/sqrt(πt).
        let mut previous = f64::INFINITY;
        for (t, trials) in [(100u64, 8000u64), (400, 8000), (1600, 8000)] {
            let estimate =
                laplacian_drift_estimate(|x| Ok((x as f64).abs()), t, trials, 1401 + t)
                    .unwrap();
            let reference = 1.0 / (std::f64::consts::PI * t as f64).sqrt();
            assert!(
                (estimate.mean - reference).abs() <= 0.1 * reference,
                "t = {t}: {} vs {}",
                estimate.mean,
                reference
            );
            assert!(estimate.mean < previous, "drift must decrease with t");
            previous = estimate.mean;
        }
    }

    #[test]
    fn same_seed_reproduces_the_estimate() {
        let a = laplacian_drift_estimate(|x| Ok((x * x) as f64), 50, 500, 77).unwrap();
        let b = laplacian_drift_estimate(|x| Ok((x * x) as f64), 50, 500, 77).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn tabulated_function_errors_when_the_walk_leaves_its_range() {
        let table = tabulated_function(vec![0.0], 0);
        assert!(table(0).is_ok());
        assert!(table(1).is_err());
        assert!(table(-1).is_err());
        // Defined only at the origin: with 64 trials of a single step,
        // some trial surely moves.
        let result = laplacian_drift_estimate(tabulated_function(vec![0.0], 0), 1, 64, 9);
        assert!(matches!(result, Err(Error::OutOfRange(_))));
        // A wide enough table covers every reachable endpoint.
        let wide = tabulated_function((0..=20).map(|i| (i - 10) as f64).collect(), -10);
        let estimate = laplacian_drift_estimate(wide, 10, 200, 11).unwrap();
        assert!(estimate.mean.abs() <= 5.0 * estimate.stderr.max(1e-12));
    }

    #[test]
    fn parameter_errors() {
        assert!(laplacian_drift_estimate(|x| Ok(x as f64), 0, 100, 1).is_err());
        assert!(laplacian_drift_estimate(|x| Ok(x as f64), 10, 1, 1).is_err());
    }
}
