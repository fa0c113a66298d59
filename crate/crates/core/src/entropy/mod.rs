//! Finite distributions, divergences, exact walk laws, and the audits
//! tying entropy growth to the size of harmonic functions.

pub mod audit;
pub mod dist;
pub mod walk_dist;

pub use audit::{
    check_inequality_suite, growth_bound_audit, lazy_line_curve, GrowthBoundRow,
    InequalityReport, LineWalkCurve,
};
pub use dist::{
    dbtv, kl_divergence, total_variation, FiniteDistribution, JointDistribution,
};
pub use walk_dist::{
    entropy_sequence, exact_walk_distribution, harmonic_growth_lower_curve, EntropySequence,
    DEFAULT_SUPPORT_CAP,
};
