//! Dense kernel tables over a square window, with invariant scans.

use super::exact::ExactKernel;
use super::kappa;
use crate::{Error, Result};
use serde_json::{json, Value};
use std::f64::consts::PI;

/// Normalization of the kernel table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// a(0) = 0.
    Standard,
    /// Shifted so the origin value is ½.
    Shifted,
}

impl Normalization {
    pub fn offset(self) -> f64 {
        match self {
            Normalization::Standard => 0.0,
            Normalization::Shifted => 0.5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Normalization::Standard => "standard",
            Normalization::Shifted => "shifted",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Normalization::Standard),
            "shifted" => Ok(Normalization::Shifted),
            other => Err(Error::InvalidParameter(format!(
                "unknown normalization {other:?}, expected standard|shifted"
            ))),
        }
    }
}

/// Dense values of the kernel on the square [−radius, radius]².
pub struct KernelTable {
    radius: i64,
    values: Vec<f64>,
    normalization: Normalization,
    accuracy: f64,
}

/// Result of the harmonicity scan over a table.
#[derive(Clone, Copy, Debug)]
pub struct HarmonicityScan {
    /// max over interior z ≠ 0 of |¼ Σ_{w∼z} a(w) − a(z)|.
    pub max_residual: f64,
    /// ¼ Σ_{w∼0} a(w) − a(0); should be 1.
    pub origin_defect: f64,
}

/// Build a table from the exact wedge construction.
pub fn build_kernel_table(
    radius: i64,
    tol: f64,
    normalization: Normalization,
) -> Result<KernelTable> {
    let exact = ExactKernel::build(radius)?;
    if tol < exact.accuracy() {
        return Err(Error::Tolerance {
            requested: tol,
            achievable: exact.accuracy(),
        });
    }
    let side = (2 * radius + 1) as usize;
    let mut values = vec![0.0; side * side];
    for x in -radius..=radius {
        for y in -radius..=radius {
            let idx = ((y + radius) as usize) * side + (x + radius) as usize;
            values[idx] = exact.value(x, y)? + normalization.offset();
        }
    }
    Ok(KernelTable {
        radius,
        values,
        normalization,
        accuracy: exact.accuracy(),
    })
}

impl KernelTable {
    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    fn index(&self, x: i64, y: i64) -> Result<usize> {
        if x.abs() > self.radius || y.abs() > self.radius {
            return Err(Error::OutOfRange(format!(
                "({x},{y}) outside table radius {}",
                self.radius
            )));
        }
        let side = (2 * self.radius + 1) as usize;
        Ok(((y + self.radius) as usize) * side + (x + self.radius) as usize)
    }

    pub fn value(&self, x: i64, y: i64) -> Result<f64> {
        Ok(self.values[self.index(x, y)?])
    }

    /// Exhaustive harmonicity scan over interior points.
    pub fn harmonicity_scan(&self) -> HarmonicityScan {
        let mut max_residual: f64 = 0.0;
        let mut origin_defect = 0.0;
        for x in -(self.radius - 1)..=(self.radius - 1) {
            for y in -(self.radius - 1)..=(self.radius - 1) {
                let average = 0.25
                    * (self.value(x + 1, y).unwrap()
                        + self.value(x - 1, y).unwrap()
                        + self.value(x, y + 1).unwrap()
                        + self.value(x, y - 1).unwrap());
                let delta = average - self.value(x, y).unwrap();
                if x == 0 && y == 0 {
                    origin_defect = delta;
                } else {
                    max_residual = max_residual.max(delta.abs());
                }
            }
        }
        HarmonicityScan {
            max_residual,
            origin_defect,
        }
    }

    /// max over cutoff ≤ |z|₂ ≤ radius of |a(z) − ((2/π)ln|z| + constant)|,
    /// read in standard normalization (the table's offset is removed).
    pub fn asymptotic_deviation_with_constant(
        &self,
        inner_cutoff: f64,
        constant: f64,
    ) -> Result<f64> {
        if self.radius < 25 {
            return Err(Error::InvalidParameter(format!(
                "asymptotic deviation needs radius ≥ 25, table has {}",
                self.radius
            )));
        }
        if !(inner_cutoff >= 1.0) || inner_cutoff >= self.radius as f64 {
            return Err(Error::InvalidParameter(format!(
                "inner cutoff {inner_cutoff} must lie in [1, radius)"
            )));
        }
        let mut deviation: f64 = 0.0;
        for x in -self.radius..=self.radius {
            for y in -self.radius..=self.radius {
                let r = ((x * x + y * y) as f64).sqrt();
                if r < inner_cutoff || r > self.radius as f64 {
                    continue;
                }
                let standard = self.value(x, y)? - self.normalization.offset();
                let predicted = (2.0 / PI) * r.ln() + constant;
                deviation = deviation.max((standard - predicted).abs());
            }
        }
        Ok(deviation)
    }

    /// Deviation from the classical asymptotic constant κ.
    pub fn asymptotic_deviation(&self, inner_cutoff: f64) -> Result<f64> {
        self.asymptotic_deviation_with_constant(inner_cutoff, kappa())
    }

    /// (x, y, value) triples, x-major, both coordinates ascending.
    pub fn rows(&self) -> impl Iterator<Item = (i64, i64, f64)> + '_ {
        let radius = self.radius;
        (-radius..=radius).flat_map(move |x| {
            (-radius..=radius).map(move |y| (x, y, self.value(x, y).unwrap()))
        })
    }

    /// JSON grid with a header object recording the construction.
    pub fn to_json(&self) -> Value {
        let side = (2 * self.radius + 1) as usize;
        let grid: Vec<Vec<f64>> = (0..side)
            .map(|row| self.values[row * side..(row + 1) * side].to_vec())
            .collect();
        json!({
            "radius": self.radius,
            "normalization": self.normalization.name(),
            "accuracy": self.accuracy,
            "rows_are_y": "grid[y + radius][x + radius]",
            "grid": grid,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::series::series_kernel;
    use crate::rng::stream;
    use rand::Rng;

    #[test]
    fn small_table_values_and_shape() {
        let table = build_kernel_table(5, 1e-10, Normalization::Standard).unwrap();
        assert_eq!(table.rows().count(), 121);
        assert_eq!(table.value(0, 0).unwrap(), 0.0);
        assert!((table.value(1, 0).unwrap() - 1.0).abs() <= 1e-13);
        assert!(table.accuracy() <= 1e-12);
    }

    #[test]
    fn shifted_normalization_is_a_half_shift() {
        let standard = build_kernel_table(6, 1e-10, Normalization::Standard).unwrap();
        let shifted = build_kernel_table(6, 1e-10, Normalization::Shifted).unwrap();
        assert_eq!(shifted.value(0, 0).unwrap(), 0.5);
        for (x, y) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            assert!((shifted.value(x, y).unwrap() - 1.5).abs() <= 1e-13);
        }
        for (x, y, v) in standard.rows() {
            assert_eq!(shifted.value(x, y).unwrap(), v + 0.5);
        }
    }

    #[test]
    fn harmonicity_scan_passes_for_both_normalizations() {
        for normalization in [Normalization::Standard, Normalization::Shifted] {
            let table = build_kernel_table(10, 1e-10, normalization).unwrap();
            let scan = table.harmonicity_scan();
            assert!(scan.max_residual <= 4.0 * table.accuracy());
            assert!((scan.origin_defect - 1.0).abs() <= 4.0 * table.accuracy());
        }
    }

    #[test]
    fn eight_fold_symmetry_is_exact() {
        let table = build_kernel_table(7, 1e-10, Normalization::Standard).unwrap();
        let v = table.value(4, 2).unwrap();
        for (x, y) in [(2, 4), (-4, 2), (4, -2), (-2, -4), (-4, -2), (2, -4)] {
            assert_eq!(table.value(x, y).unwrap(), v);
        }
    }

    #[test]
    fn asymptotic_deviation_small_and_monotone() {
        let table = build_kernel_table(100, 1e-10, Normalization::Standard).unwrap();
        let at_20 = table.asymptotic_deviation(20.0).unwrap();
        let at_40 = table.asymptotic_deviation(40.0).unwrap();
        let at_80 = table.asymptotic_deviation(80.0).unwrap();
        assert!(at_20 <= 0.01, "deviation {at_20} at cutoff 20");
        assert!(at_40 <= at_20);
        assert!(at_80 <= at_40);
        // Same scan against a shifted constant must blow up: honest scale.
        let control = table
            .asymptotic_deviation_with_constant(20.0, kappa() + 0.1)
            .unwrap();
        assert!(control >= 0.09, "negative control {control}");
    }

    #[test]
    fn kappa_is_confirmed_by_the_series_oracle() {
        // Fit the additive constant from far points of the series and
        // compare with (2γ + ln 8)/π; residual corrections are O(r⁻²).
        let points = [(40, 0), (0, 45), (30, 30), (36, 24), (44, 7), (25, 38)];
        let mut fitted = 0.0;
        for (x, y) in points {
            let s = series_kernel(x, y, 1e-8).unwrap();
            let r = ((x * x + y * y) as f64).sqrt();
            fitted += s.value - (2.0 / PI) * r.ln();
        }
        fitted /= points.len() as f64;
        assert!(
            (fitted - kappa()).abs() <= 2e-3,
            "fitted constant {fitted} vs kappa {}",
            kappa()
        );
    }

    #[test]
    fn random_points_cross_check_against_the_series() {
        let table = build_kernel_table(50, 1e-10, Normalization::Shifted).unwrap();
        let mut rng = stream(0x5eed_0001);
        for _ in 0..100 {
            let x = rng.random_range(-50..=50i64);
            let y = rng.random_range(-50..=50i64);
            let oracle = series_kernel(x, y, 1e-8).unwrap();
            let got = table.value(x, y).unwrap() - 0.5;
            assert!(
                (got - oracle.value).abs() <= oracle.error_bound + table.accuracy(),
                "table {got} vs series {} at ({x},{y})",
                oracle.value
            );
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            build_kernel_table(5, 1e-14, Normalization::Standard),
            Err(Error::Tolerance { .. })
        ));
        assert!(build_kernel_table(300, 1e-10, Normalization::Standard).is_err());
        let table = build_kernel_table(5, 1e-10, Normalization::Standard).unwrap();
        assert!(table.value(6, 0).is_err());
        assert!(table.asymptotic_deviation(2.0).is_err());
        assert!(Normalization::parse("shifted").is_ok());
        assert!(Normalization::parse("exotic").is_err());
    }
}
