//! Small statistical helpers shared by the experiment modules.

use crate::{Error, Result};

/// Ordinary least-squares line through (x, y) pairs.
#[derive(Clone, Copy, Debug)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fit y = slope·x + intercept; requires at least two distinct x values.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<LineFit> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least two points for a line fit".into(),
        ));
    }
    let mean_x = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidParameter(
            "line fit needs at least two distinct x values".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Standard error of a Bernoulli frequency estimate.
pub fn bernoulli_stderr(p_hat: f64, trials: u64) -> f64 {
    if trials == 0 {
        return f64::NAN;
    }
    (p_hat * (1.0 - p_hat) / trials as f64).sqrt()
}

/// Sample mean and its standard error.
pub fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    if samples.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_is_recovered() {
        let points: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 3.0 - 2.0 * i as f64)).collect();
        let fit = linear_fit(&points).unwrap();
        assert!((fit.slope + 2.0).abs() <= 1e-12);
        assert!((fit.intercept - 3.0).abs() <= 1e-12);
        assert!((fit.r_squared - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn noisy_points_have_partial_r_squared() {
        let points = [(0.0, 0.0), (1.0, 1.0), (2.0, 0.5), (3.0, 2.0)];
        let fit = linear_fit(&points).unwrap();
        assert!(fit.r_squared > 0.0 && fit.r_squared < 1.0);
    }

    #[test]
    fn degenerate_inputs_error() {
        assert!(linear_fit(&[]).is_err());
        assert!(linear_fit(&[(1.0, 2.0)]).is_err());
        assert!(linear_fit(&[(1.0, 2.0), (1.0, 3.0)]).is_err());
    }

    #[test]
    fn mean_and_stderr_match_hand_values() {
        let (mean, se) = mean_and_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(mean, 2.5);
        let var: f64 = (2.25 + 0.25 + 0.25 + 2.25) / 3.0;
        assert!((se - (var / 4.0).sqrt()).abs() <= 1e-15);
    }
}
