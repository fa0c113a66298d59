//! Binomial mass tables and their finite differences, with the
//! sup-norm bound |∂^m b(k)| ≤ (m / (p(1−p)n))^{m/2}.

use crate::{Error, Result};
use serde::Serialize;

/// Masses of Bin(n, p), zero outside 0..=n.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    n: usize,
    p: f64,
    masses: Vec<f64>,
}

impl BinomialTable {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "p must lie strictly between 0 and 1, got {p}"
            )));
        }
        // Multiplicative recurrence from b(0) = (1−p)^n.
        let mut masses = Vec::with_capacity(n + 1);
        let mut value = (1.0 - p).powi(n as i32);
        masses.push(value);
        for k in 0..n {
            value *= (n - k) as f64 / (k + 1) as f64 * p / (1.0 - p);
            masses.push(value);
        }
        Ok(Self { n, p, masses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// b(k) for any integer k, zero outside the support.
    pub fn mass(&self, k: i64) -> f64 {
        if k < 0 || k > self.n as i64 {
            0.0
        } else {
            self.masses[k as usize]
        }
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }
}

/// m-fold difference ∂^m b over k ∈ [−m, n], where ∂ψ(k) = ψ(k) − ψ(k+1).
/// Index i of the result holds ∂^m b(i − m).
pub fn finite_difference(table: &BinomialTable, m: usize) -> Vec<f64> {
    let mut values = table.masses().to_vec();
    for _ in 0..m {
        // next[i] = prev(i−1) − prev(i), with zeros outside.
        let mut next = Vec::with_capacity(values.len() + 1);
        for i in 0..=values.len() {
            let left = if i > 0 { values[i - 1] } else { 0.0 };
            let right = values.get(i).copied().unwrap_or(0.0);
            next.push(left - right);
        }
        values = next;
    }
    values
}

/// Sup-norm bound on ∂^m b for Bin(n, p).
pub fn derivative_bound(n: usize, m: usize, p: f64) -> f64 {
    (m as f64 / (p * (1.0 - p) * n as f64)).powf(m as f64 / 2.0)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DerivativeBoundReport {
    pub checked: u64,
    pub violations: u64,
    /// Largest observed |∂^m b| / bound, and where it occurred.
    pub max_ratio: f64,
    pub tightest_n: usize,
    pub tightest_m: usize,
    pub tightest_p: f64,
}

/// Exhaustively compare max |∂^m b| against the bound over the grid.
pub fn verify_derivative_bound(
    n_max: usize,
    m_max: usize,
    p_set: &[f64],
) -> Result<DerivativeBoundReport> {
    if n_max == 0 || m_max == 0 || p_set.is_empty() {
        return Err(Error::InvalidParameter("empty verification grid".into()));
    }
    let mut report = DerivativeBoundReport {
        checked: 0,
        violations: 0,
        max_ratio: 0.0,
        tightest_n: 0,
        tightest_m: 0,
        tightest_p: 0.0,
    };
    for &p in p_set {
        for n in 1..=n_max {
            let table = BinomialTable::new(n, p)?;
            let mut values = table.masses().to_vec();
            for m in 1..=m_max {
                let mut next = Vec::with_capacity(values.len() + 1);
                for i in 0..=values.len() {
                    let left = if i > 0 { values[i - 1] } else { 0.0 };
                    let right = values.get(i).copied().unwrap_or(0.0);
                    next.push(left - right);
                }
                values = next;
                let sup = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
                let ratio = sup / derivative_bound(n, m, p);
                report.checked += 1;
                if ratio > 1.0 {
                    report.violations += 1;
                }
                if ratio > report.max_ratio {
                    report.max_ratio = ratio;
                    report.tightest_n = n;
                    report.tightest_m = m;
                    report.tightest_p = p;
                }
            }
        }
    }
    Ok(report)
}

/// The decay majorant (m/(α(1−α)))^{m/2} (g + k)^c k^{1−m/2} appearing
/// in the kill-count estimate.
pub fn difference_majorant(m: usize, alpha: f64, g: f64, c: f64, k: f64) -> f64 {
    (m as f64 / (alpha * (1.0 - alpha))).powf(m as f64 / 2.0)
        * (g + k).powf(c)
        * k.powf(1.0 - m as f64 / 2.0)
}
