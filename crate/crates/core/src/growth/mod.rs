//! Visit-count profiles of the lazy base walk, the conditional-entropy
//! lower bound they induce for wreath walks, and the iterated-depth
//! growth experiment built on top.

mod bound;
mod iterated;
pub(crate) mod profile;

pub use bound::{
    conditional_entropy_lower_bound, entropy_upper_envelope, mean_rich_sites, two_element_lamp,
    LampEntropyTable, LowerBoundEstimate, UpperBoundEstimate,
};
pub use iterated::{
    iterated_growth_experiment, iterated_log, nested_walk_sanity, IteratedGrowthRow,
    NestedSanityReport,
};
pub use profile::{visit_count_profile, VisitProfile};
