//! Algorithms for random walks on iterated wreath products ("lamplighter"
//! groups), the discrete potential kernel on Z², explicitly harmonic
//! functions of logarithmic growth, and the entropy machinery used to
//! study them numerically.
//!
//! The crate is organized by subject:
//!
//! * [`group`] — group expressions (`C2`, `Z`, `Z2`, binary `wr`), sparse
//!   wreath-product elements, exact word metrics and BFS oracles;
//! * [`kernel`] — the potential kernel `a` of the simple walk on Z², built
//!   by exact recurrences in `q + r/π` rational arithmetic and
//!   cross-checked by a truncated heat-kernel series;
//! * [`harmonic`] — harmonic functions on wreath products (constants, base
//!   coordinates, the sign-times-kernel function of logarithmic growth),
//!   residual scans and growth profiles;
//! * [`walk`] — seeded trajectory sampling, stopping times, the coupled
//!   gluing experiment, escape probabilities, lamp laws at returns and the
//!   excursion-swap check;
//! * [`entropy`] — finite distributions, entropy / divergence functionals,
//!   exact walk distributions and inequality audits;
//! * [`operator`] — binomial tables, finite differences, lazy-power
//!   expansions of Markov operators;
//! * [`growth`] — visit-count profiles and conditional-entropy lower
//!   bounds for entropy growth experiments, iterated over wreath depth.
//!
//! Every Monte Carlo routine takes an explicit `u64` seed, derives
//! per-trial streams with [`rng::trial_seed`], and produces results that
//! are byte-for-byte reproducible across runs and thread counts.

pub mod entropy;
pub mod error;
pub mod group;
pub mod growth;
pub mod operator;
pub mod harmonic;
pub mod kernel;
pub mod rng;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
pub use group::{Element, GroupSpec, WreathElement};
