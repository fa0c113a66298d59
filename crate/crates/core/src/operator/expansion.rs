//! Finite Markov operators and the lazy-power expansion
//! Q^k = Σ_j b(j) P^j with Q = αI + (1−α)P, together with the
//! coefficient calculus for (I−P)^m Q^k.

use crate::operator::binomial::{derivative_bound, BinomialTable};
use crate::{Error, Result};
use nalgebra::DMatrix;
use serde::Serialize;

/// Largest operator size accepted for dense verification.
pub const MAX_OPERATOR_SIZE: usize = 256;

/// A row-stochastic matrix acting on a finite state space.
#[derive(Clone, Debug)]
pub struct FiniteMarkovOperator {
    matrix: DMatrix<f64>,
}

impl FiniteMarkovOperator {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidParameter(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let size = matrix.nrows();
        if size == 0 || size > MAX_OPERATOR_SIZE {
            return Err(Error::InvalidParameter(format!(
                "operator size must lie in 1..={MAX_OPERATOR_SIZE}, got {size}"
            )));
        }
        for row in 0..size {
            let mut sum = 0.0;
            for col in 0..size {
                let entry = matrix[(row, col)];
                if entry < 0.0 {
                    return Err(Error::InvalidMeasure(format!(
                        "negative transition probability {entry} at ({row}, {col})"
                    )));
                }
                sum += entry;
            }
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidMeasure(format!(
                    "row {row} sums to {sum}, expected 1"
                )));
            }
        }
        Ok(Self { matrix })
    }

    /// Simple random walk on the cycle with `size` vertices.
    pub fn cycle_walk(size: usize) -> Result<Self> {
        if size < 3 {
            return Err(Error::InvalidParameter(format!(
                "a cycle walk needs at least 3 vertices, got {size}"
            )));
        }
        let mut matrix = DMatrix::zeros(size, size);
        for i in 0..size {
            matrix[(i, (i + 1) % size)] = 0.5;
            matrix[(i, (i + size - 1) % size)] += 0.5;
        }
        Self::new(matrix)
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LazyExpansionReport {
    pub size: usize,
    pub alpha: f64,
    pub k: usize,
    pub m: usize,
    /// Max entrywise gap between Q^k and Σ_j b(j) P^j.
    pub power_discrepancy: f64,
    /// Max entrywise gap between (I−P)^m Q^k and Σ_j c_j P^j.
    pub difference_discrepancy: f64,
    /// sup_j |c_j| for the differenced coefficients.
    pub coefficient_sup: f64,
    /// The bound (m / (α(1−α)k))^{m/2} it must respect.
    pub coefficient_bound: f64,
}

/// Coefficients of Σ_j c_j P^j for (I−P)^m Q^k: the lazy binomial
/// masses b(j) = C(k,j) α^{k−j} (1−α)^j pushed through m rounds of
/// c'_j = c_j − c_{j−1}.
pub fn differenced_coefficients(k: usize, alpha: f64, m: usize) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie strictly between 0 and 1, got {alpha}"
        )));
    }
    let mut coefficients = if k == 0 {
        vec![1.0]
    } else {
        BinomialTable::new(k, 1.0 - alpha)?.masses().to_vec()
    };
    for _ in 0..m {
        let mut next = Vec::with_capacity(coefficients.len() + 1);
        for j in 0..=coefficients.len() {
            let current = coefficients.get(j).copied().unwrap_or(0.0);
            let previous = if j > 0 { coefficients[j - 1] } else { 0.0 };
            next.push(current - previous);
        }
        coefficients = next;
    }
    Ok(coefficients)
}

fn max_abs_difference(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Verify both operator identities on a concrete finite chain and
/// report the worst entrywise discrepancies.
pub fn lazy_power_expansion_check(
    operator: &FiniteMarkovOperator,
    alpha: f64,
    k: usize,
    m: usize,
) -> Result<LazyExpansionReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie strictly between 0 and 1, got {alpha}"
        )));
    }
    let size = operator.size();
    let p = operator.matrix();
    let identity = DMatrix::<f64>::identity(size, size);

    // Q^k by repeated multiplication.
    let q = &identity * alpha + p * (1.0 - alpha);
    let mut q_power = identity.clone();
    for _ in 0..k {
        q_power = &q_power * &q;
    }

    // Powers of P up to the largest exponent needed (k + m).
    let mut p_powers = Vec::with_capacity(k + m + 1);
    p_powers.push(identity.clone());
    for j in 0..(k + m) {
        let next = &p_powers[j] * p;
        p_powers.push(next);
    }

    let base_coefficients = differenced_coefficients(k, alpha, 0)?;
    let mut expansion = DMatrix::zeros(size, size);
    for (j, &c) in base_coefficients.iter().enumerate() {
        expansion += &p_powers[j] * c;
    }
    let power_discrepancy = max_abs_difference(&q_power, &expansion);

    // (I−P)^m Q^k directly...
    let laplacian = &identity - p;
    let mut lhs = q_power;
    for _ in 0..m {
        lhs = &laplacian * &lhs;
    }
    // ...and through the coefficient recurrence.
    let coefficients = differenced_coefficients(k, alpha, m)?;
    let mut rhs = DMatrix::zeros(size, size);
    for (j, &c) in coefficients.iter().enumerate() {
        rhs += &p_powers[j] * c;
    }
    let difference_discrepancy = max_abs_difference(&lhs, &rhs);

    let coefficient_sup = coefficients.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let coefficient_bound = if m == 0 {
        1.0
    } else if k == 0 {
        f64::INFINITY
    } else {
        // With p = 1−α the binomial variance term is α(1−α)k.
        derivative_bound(k, m, 1.0 - alpha)
    };

    Ok(LazyExpansionReport {
        size,
        alpha,
        k,
        m,
        power_discrepancy,
        difference_discrepancy,
        coefficient_sup,
        coefficient_bound,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionAuditRow {
    pub identity: String,
    pub size: usize,
    pub k: usize,
    pub m: usize,
    pub alpha: f64,
    pub max_discrepancy: f64,
}

/// Run both identities over a parameter grid and flatten the results
/// into one audit row per identity per parameter point.
pub fn expansion_audit(
    operator: &FiniteMarkovOperator,
    alphas: &[f64],
    ks: &[usize],
    ms: &[usize],
) -> Result<Vec<ExpansionAuditRow>> {
    if alphas.is_empty() || ks.is_empty() || ms.is_empty() {
        return Err(Error::InvalidParameter("empty audit grid".into()));
    }
    let mut rows = Vec::new();
    for &alpha in alphas {
        for &k in ks {
            for &m in ms {
                let report = lazy_power_expansion_check(operator, alpha, k, m)?;
                rows.push(ExpansionAuditRow {
                    identity: "lazy-power-expansion".into(),
                    size: report.size,
                    k,
                    m,
                    alpha,
                    max_discrepancy: report.power_discrepancy,
                });
                rows.push(ExpansionAuditRow {
                    identity: "difference-expansion".into(),
                    size: report.size,
                    k,
                    m,
                    alpha,
                    max_discrepancy: report.difference_discrepancy,
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::binomial::finite_difference;

    #[test]
    fn cycle_walk_is_doubly_stochastic() {
        let walk = FiniteMarkovOperator::cycle_walk(8).unwrap();
        let matrix = walk.matrix();
        for i in 0..8 {
            let row: f64 = (0..8).map(|j| matrix[(i, j)]).sum();
            let col: f64 = (0..8).map(|j| matrix[(j, i)]).sum();
            assert!((row - 1.0).abs() <= 1e-15);
            assert!((col - 1.0).abs() <= 1e-15);
        }
        assert_eq!(matrix[(0, 1)], 0.5);
        assert_eq!(matrix[(0, 7)], 0.5);
        assert_eq!(matrix[(3, 3)], 0.0);
    }

    #[test]
    fn tiny_cycle_doubles_the_edge() {
        // On the 3-cycle both neighbours of a vertex are distinct, so
        // the construction still rows-sums to one.
        let walk = FiniteMarkovOperator::cycle_walk(3).unwrap();
        assert_eq!(walk.matrix()[(0, 1)], 0.5);
        assert_eq!(walk.matrix()[(0, 2)], 0.5);
    }

    #[test]
    fn zeroth_power_is_exactly_the_identity() {
        let walk = FiniteMarkovOperator::cycle_walk(16).unwrap();
        let report = lazy_power_expansion_check(&walk, 0.5, 0, 0).unwrap();
        assert_eq!(report.power_discrepancy, 0.0);
        assert_eq!(report.difference_discrepancy, 0.0);
    }

    #[test]
    fn expansion_holds_on_the_cycle_to_machine_precision() {
        let walk = FiniteMarkovOperator::cycle_walk(64).unwrap();
        for alpha in [0.25, 0.5, 0.75] {
            for k in [1usize, 5, 20, 40] {
                for m in [0usize, 1, 3, 5] {
                    let report = lazy_power_expansion_check(&walk, alpha, k, m).unwrap();
                    assert!(
                        report.power_discrepancy <= 1e-12,
                        "alpha = {alpha}, k = {k}: {}",
                        report.power_discrepancy
                    );
                    assert!(
                        report.difference_discrepancy <= 1e-12,
                        "alpha = {alpha}, k = {k}, m = {m}: {}",
                        report.difference_discrepancy
                    );
                    assert!(
                        report.coefficient_sup <= report.coefficient_bound * (1.0 + 1e-12),
                        "alpha = {alpha}, k = {k}, m = {m}: sup {} vs bound {}",
                        report.coefficient_sup,
                        report.coefficient_bound
                    );
                }
            }
        }
    }

    #[test]
    fn coefficients_match_the_signed_binomial_difference() {
        // With Δc(j) = c(j) − c(j−1) and ∂ψ(k) = ψ(k) − ψ(k+1) one has
        // Δ^m b(j) = (−1)^m ∂^m b(j − m), which is exactly entry j of
        // the binomial module's difference vector up to sign.
        let k = 12;
        let alpha = 0.35;
        for m in 1..=4 {
            let via_recurrence = differenced_coefficients(k, alpha, m).unwrap();
            let table = BinomialTable::new(k, 1.0 - alpha).unwrap();
            let via_difference = finite_difference(&table, m);
            assert_eq!(via_recurrence.len(), via_difference.len());
            let sup_a = via_recurrence.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let sup_b = via_difference.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            assert!((sup_a - sup_b).abs() <= 1e-15);
            for (j, &value) in via_recurrence.iter().enumerate() {
                let signed = if m % 2 == 0 {
                    via_difference[j]
                } else {
                    -via_difference[j]
                };
                assert!(
                    (value - signed).abs() <= 1e-15,
                    "m = {m}, j = {j}: {value} vs {signed}"
                );
            }
        }
    }

    #[test]
    fn audit_rows_cover_the_grid() {
        let walk = FiniteMarkovOperator::cycle_walk(12).unwrap();
        let rows = expansion_audit(&walk, &[0.5], &[0, 3], &[1, 2]).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 2);
        assert!(rows.iter().all(|r| r.size == 12));
        assert!(rows.iter().all(|r| r.max_discrepancy <= 1e-12));
        assert!(rows
            .iter()
            .any(|r| r.identity == "lazy-power-expansion"));
        assert!(rows.iter().any(|r| r.identity == "difference-expansion"));
        let json = serde_json::to_string(&rows[0]).unwrap();
        assert!(json.contains("\"identity\""));
        assert!(json.contains("\"max_discrepancy\""));
    }

    #[test]
    fn validation_rejects_bad_operators_and_parameters() {
        let lopsided = DMatrix::from_row_slice(2, 2, &[0.6, 0.6, 0.5, 0.5]);
        assert!(FiniteMarkovOperator::new(lopsided).is_err());
        let negative = DMatrix::from_row_slice(2, 2, &[1.5, -0.5, 0.5, 0.5]);
        assert!(FiniteMarkovOperator::new(negative).is_err());
        let rectangular = DMatrix::from_row_slice(1, 2, &[0.5, 0.5]);
        assert!(FiniteMarkovOperator::new(rectangular).is_err());
        let huge = DMatrix::<f64>::identity(257, 257);
        assert!(FiniteMarkovOperator::new(huge).is_err());
        assert!(FiniteMarkovOperator::cycle_walk(2).is_err());

        let walk = FiniteMarkovOperator::cycle_walk(8).unwrap();
        assert!(lazy_power_expansion_check(&walk, 0.0, 3, 1).is_err());
        assert!(lazy_power_expansion_check(&walk, 1.0, 3, 1).is_err());
        assert!(differenced_coefficients(3, 1.2, 1).is_err());
        assert!(expansion_audit(&walk, &[], &[1], &[1]).is_err());
    }
}
