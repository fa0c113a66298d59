//! Operator calculus on finite chains: binomial difference tables,
//! the lazy-power expansion of Q = αI + (1−α)P, and Monte Carlo
//! drift estimates for discrete Laplacians.

mod binomial;
mod drift;
mod expansion;

pub use binomial::{
    derivative_bound, difference_majorant, finite_difference, verify_derivative_bound,
    BinomialTable, DerivativeBoundReport,
};
pub use drift::{laplacian_drift_estimate, tabulated_function, DriftEstimate};
pub use expansion::{
    differenced_coefficients, expansion_audit, lazy_power_expansion_check, ExpansionAuditRow,
    FiniteMarkovOperator, LazyExpansionReport, MAX_OPERATOR_SIZE,
};
