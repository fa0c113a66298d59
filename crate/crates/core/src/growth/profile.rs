//! Visit-count profiles of the lazy base walk.

use crate::group::{identity, multiply, standard_generators, Element, GroupSpec};
use crate::rng::trial_stream;
use crate::{Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Occupation counts of one sampled base trajectory: how many of the
/// times 0..=n the walker spent at each site.
#[derive(Clone, Debug)]
pub struct VisitProfile {
    counts: BTreeMap<Element, u64>,
    n: u64,
    final_position: Element,
}

impl VisitProfile {
    pub fn counts(&self) -> &BTreeMap<Element, u64> {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn distinct_sites(&self) -> usize {
        self.counts.len()
    }

    /// Total occupation; always n + 1 (every time unit is spent somewhere).
    pub fn total_count(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Number of sites visited at least `threshold` times.
    pub fn sites_with_at_least(&self, threshold: u64) -> usize {
        self.counts.values().filter(|&&c| c >= threshold).count()
    }

    pub fn final_position(&self) -> &Element {
        &self.final_position
    }

    /// Number of steps the walk launched from `site`: the occupation
    /// count, minus one if the trajectory ends there (no step follows
    /// the last visit).
    pub fn steps_launched_from(&self, site: &Element) -> u64 {
        let count = self.counts.get(site).copied().unwrap_or(0);
        count - u64::from(*site == self.final_position && count > 0)
    }
}

/// The base marginal of the move-or-switch walk: hold with probability
/// ½, otherwise move by a uniformly chosen generator.
pub(crate) fn lazy_base_profile(
    base: &GroupSpec,
    n: u64,
    rng: &mut ChaCha8Rng,
) -> Result<VisitProfile> {
    if !matches!(base, GroupSpec::IntegerLine | GroupSpec::IntegerGrid) {
        return Err(Error::Unsupported(format!(
            "visit profiles need a lattice base, got {base}"
        )));
    }
    let generators = standard_generators(base);
    let mut position = identity(base);
    let mut counts: BTreeMap<Element, u64> = BTreeMap::new();
    *counts.entry(position.clone()).or_insert(0) += 1;
    for _ in 0..n {
        let u: f64 = rng.random();
        if u >= 0.5 {
            let pick = (((u - 0.5) * 2.0 * generators.len() as f64) as usize)
                .min(generators.len() - 1);
            position = multiply(base, &position, &generators[pick])?;
        }
        *counts.entry(position.clone()).or_insert(0) += 1;
    }
    Ok(VisitProfile {
        counts,
        n,
        final_position: position,
    })
}

/// Sample one visit-count profile of the lazy base walk.
pub fn visit_count_profile(base: &GroupSpec, n: u64, seed: u64) -> Result<VisitProfile> {
    lazy_base_profile(base, n, &mut trial_stream(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_steps_is_one_site_with_count_one() {
        let profile = visit_count_profile(&GroupSpec::IntegerGrid, 0, 7).unwrap();
        assert_eq!(profile.distinct_sites(), 1);
        assert_eq!(profile.total_count(), 1);
        assert_eq!(profile.final_position(), &Element::Grid(0, 0));
        assert_eq!(profile.steps_launched_from(&Element::Grid(0, 0)), 0);
    }

    #[test]
    fn counting_identity_on_every_sample() {
        for (base, seed) in [
            (GroupSpec::IntegerLine, 11u64),
            (GroupSpec::IntegerGrid, 12),
            (GroupSpec::IntegerLine, 13),
            (GroupSpec::IntegerGrid, 14),
        ] {
            for n in [1u64, 17, 256, 1000] {
                let profile = visit_count_profile(&base, n, seed).unwrap();
                assert_eq!(profile.total_count(), n + 1);
                assert!(profile.distinct_sites() as u64 <= n + 1);
                // Launch counts partition the n steps.
                let launches: u64 = profile
                    .counts()
                    .keys()
                    .map(|site| profile.steps_launched_from(site))
                    .sum();
                assert_eq!(launches, n);
            }
        }
    }

    #[test]
    fn profiles_are_deterministic_per_seed() {
        let a = visit_count_profile(&GroupSpec::IntegerGrid, 500, 99).unwrap();
        let b = visit_count_profile(&GroupSpec::IntegerGrid, 500, 99).unwrap();
        assert_eq!(a.counts(), b.counts());
        assert_ne!(
            a.counts(),
            visit_count_profile(&GroupSpec::IntegerGrid, 500, 100)
                .unwrap()
                .counts()
        );
    }

    #[test]
    fn rich_sites_on_the_grid_track_n_over_log_n() {
        let n = 4096u64;
        let threshold = (n as f64).ln();
        let trials = 200u64;
        let mut total = 0usize;
        for trial in 0..trials {
            let profile =
                lazy_base_profile(&GroupSpec::IntegerGrid, n, &mut trial_stream(4242, trial))
                    .unwrap();
            total += profile.sites_with_at_least(threshold.ceil() as u64);
        }
        let mean = total as f64 / trials as f64;
        let reference = n as f64 / threshold;
        assert!(
            mean >= 0.2 * reference && mean <= 5.0 * reference,
            "mean rich sites {mean} outside [0.2, 5] × {reference}"
        );
    }

    #[test]
    fn non_lattice_bases_are_rejected() {
        assert!(visit_count_profile(&GroupSpec::CyclicTwo, 10, 1).is_err());
        let wreath = GroupSpec::parse("C2 wr Z").unwrap();
        assert!(visit_count_profile(&wreath, 10, 1).is_err());
    }
}
