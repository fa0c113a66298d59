//! Harmonic functions on the walk groups: explicit forms, pointwise
//! residual checks, growth profiles over word-length balls, and the
//! lamp-override map.

pub mod function;
pub mod profile;

pub use function::{
    kernel_form_residual_scan, residual_with, HarmonicForm, HarmonicFunction,
};
pub use profile::{growth_profile, lamp_override, GrowthPoint};
