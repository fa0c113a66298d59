//! The potential kernel `a` of the simple random walk on Z².
//!
//! `a` is the unique function with `a(0) = 0`, discrete harmonicity off
//! the origin, unit defect at the origin, and logarithmic growth
//!
//! ```text
//! a(z) = (2/π) ln|z| + κ + O(|z|⁻²),   κ = (2γ + ln 8)/π.
//! ```
//!
//! Two independent constructions live here: [`exact`] propagates exact
//! seed values through the harmonicity recurrences in rational
//! arithmetic, and [`series`] evaluates the heat-kernel sum
//! Σ(pₙ(0) − pₙ(z)) with Richardson acceleration. The first is the
//! production path, the second the oracle; [`table`] packages dense grids
//! with invariant scans.

pub mod exact;
pub mod series;
pub mod table;

pub use exact::{
    inv_pi_rational, rational_to_f64, ExactKernel, ExactValue, EXACT_ACCURACY, MAX_EXACT_RADIUS,
};
pub use series::{series_kernel, SeriesValue};
pub use table::{build_kernel_table, HarmonicityScan, KernelTable, Normalization};

use crate::{Error, Result};
use std::f64::consts::PI;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Additive constant in the kernel asymptotics, (2γ + ln 8)/π.
pub fn kappa() -> f64 {
    (2.0 * EULER_GAMMA + 8f64.ln()) / PI
}

/// Floor below which point evaluations refuse the requested tolerance.
pub const MIN_POINT_TOLERANCE: f64 = 1e-12;

/// The kernel at a single point, standard normalization, within `tol`.
pub fn potential_kernel(x: i64, y: i64, tol: f64) -> Result<f64> {
    if tol < MIN_POINT_TOLERANCE {
        return Err(Error::Tolerance {
            requested: tol,
            achievable: MIN_POINT_TOLERANCE,
        });
    }
    let radius = x.unsigned_abs().max(y.unsigned_abs()) as i64;
    ExactKernel::build(radius)?.value(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_evaluation_matches_closed_forms() {
        assert_eq!(potential_kernel(0, 0, 1e-10).unwrap(), 0.0);
        assert!((potential_kernel(1, 0, 1e-10).unwrap() - 1.0).abs() <= 1e-13);
        assert!((potential_kernel(1, 1, 1e-10).unwrap() - 4.0 / PI).abs() <= 1e-13);
        assert!(
            (potential_kernel(-2, 0, 1e-10).unwrap() - (4.0 - 8.0 / PI)).abs() <= 1e-13
        );
    }

    #[test]
    fn tolerance_floor_is_enforced() {
        assert!(matches!(
            potential_kernel(1, 0, 1e-13),
            Err(Error::Tolerance { .. })
        ));
    }

    #[test]
    fn kappa_value_is_stable() {
        // (2·0.5772156649… + ln 8)/π; recomputed, not transcribed.
        assert!((kappa() - 1.0293737).abs() < 1e-6);
    }
}
