//! Symmetric step measures on group elements.

use crate::group::{identity, inverse, is_identity, standard_generators, validate, Element};
use crate::{Error, GroupSpec, Result};
use rand::Rng;
use std::collections::BTreeMap;

const MASS_TOLERANCE: f64 = 1e-12;

/// A finitely supported symmetric probability measure on a group.
#[derive(Clone, Debug)]
pub struct StepMeasure {
    spec: GroupSpec,
    atoms: Vec<(Element, f64)>,
}

impl StepMeasure {
    /// Validates support distinctness, positivity, total mass and the
    /// symmetry `mass(s) = mass(s⁻¹)`.
    pub fn new(spec: GroupSpec, atoms: Vec<(Element, f64)>) -> Result<Self> {
        let mut by_element: BTreeMap<Element, f64> = BTreeMap::new();
        let mut total = 0.0;
        for (element, mass) in &atoms {
            validate(&spec, element)?;
            if !(*mass > 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "nonpositive mass {mass} on {element:?}"
                )));
            }
            if by_element.insert(element.clone(), *mass).is_some() {
                return Err(Error::InvalidMeasure(format!(
                    "duplicate atom {element:?}"
                )));
            }
            total += *mass;
        }
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMeasure(format!(
                "atom masses sum to {total}, not 1"
            )));
        }
        for (element, mass) in &by_element {
            let inv = inverse(&spec, element)?;
            let inv_mass = by_element.get(&inv).copied().unwrap_or(0.0);
            if (mass - inv_mass).abs() > MASS_TOLERANCE {
                return Err(Error::InvalidMeasure(format!(
                    "asymmetric measure: mass({element:?}) = {mass} but mass of the inverse is {inv_mass}"
                )));
            }
        }
        Ok(StepMeasure { spec, atoms })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn atoms(&self) -> &[(Element, f64)] {
        &self.atoms
    }

    /// Mass held by the identity.
    pub fn laziness(&self) -> f64 {
        self.atoms
            .iter()
            .filter(|(e, _)| is_identity(e))
            .map(|(_, p)| *p)
            .sum()
    }

    /// Uniform measure on the standard generators.
    pub fn uniform_on_generators(spec: &GroupSpec) -> Result<Self> {
        let gens = standard_generators(spec);
        let mass = 1.0 / gens.len() as f64;
        StepMeasure::new(spec.clone(), gens.into_iter().map(|g| (g, mass)).collect())
    }

    /// The lazy version αI + (1−α)·self.
    pub fn lazy(&self, alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!(
                "laziness {alpha} outside [0, 1)"
            )));
        }
        let id = identity(&self.spec);
        let mut atoms = vec![(id.clone(), alpha)];
        for (element, mass) in &self.atoms {
            let scaled = (1.0 - alpha) * mass;
            if *element == id {
                atoms[0].1 += scaled;
            } else {
                atoms.push((element.clone(), scaled));
            }
        }
        StepMeasure::new(self.spec.clone(), atoms)
    }

    /// Draw one atom; deterministic given the generator state.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &Element {
        let mut u: f64 = rng.random();
        for (element, mass) in &self.atoms {
            u -= mass;
            if u < 0.0 {
                return element;
            }
        }
        &self.atoms.last().expect("measures are nonempty").0
    }
}

/// The move-or-switch measure on the wreath product of the two specs:
/// probability ½·μ(s) to switch the current lamp by s, ½·ν(u) to move
/// the base by u.
pub fn move_or_switch(lamp: &StepMeasure, base: &StepMeasure) -> Result<StepMeasure> {
    let spec = GroupSpec::Wreath(
        Box::new(lamp.spec.clone()),
        Box::new(base.spec.clone()),
    );
    let base_id = identity(&base.spec);
    let mut atoms: Vec<(Element, f64)> = Vec::new();
    let mut push = |element: Element, mass: f64| {
        if let Some(slot) = atoms.iter_mut().find(|(e, _)| *e == element) {
            slot.1 += mass;
        } else {
            atoms.push((element, mass));
        }
    };
    for (value, mass) in &lamp.atoms {
        let mut lamps = BTreeMap::new();
        if !is_identity(value) {
            lamps.insert(base_id.clone(), value.clone());
        }
        push(Element::wreath(lamps, base_id.clone()), 0.5 * mass);
    }
    for (step, mass) in &base.atoms {
        push(Element::wreath(BTreeMap::new(), step.clone()), 0.5 * mass);
    }
    StepMeasure::new(spec, atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn lamplighter_measure() -> StepMeasure {
        let lamp = StepMeasure::uniform_on_generators(&GroupSpec::CyclicTwo).unwrap();
        let base = StepMeasure::uniform_on_generators(&GroupSpec::IntegerLine).unwrap();
        move_or_switch(&lamp, &base).unwrap()
    }

    #[test]
    fn move_or_switch_on_the_lamplighter() {
        let measure = lamplighter_measure();
        assert_eq!(measure.spec().to_string(), "C2 wr Z");
        assert_eq!(measure.atoms().len(), 3);
        let total: f64 = measure.atoms().iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() <= 1e-15);
        let probs: Vec<f64> = measure.atoms().iter().map(|(_, p)| *p).collect();
        assert_eq!(probs, vec![0.5, 0.25, 0.25]);
        assert_eq!(measure.laziness(), 0.0);
    }

    #[test]
    fn grid_move_or_switch_has_flip_half_moves_eighth() {
        let lamp = StepMeasure::uniform_on_generators(&GroupSpec::CyclicTwo).unwrap();
        let base = StepMeasure::uniform_on_generators(&GroupSpec::IntegerGrid).unwrap();
        let measure = move_or_switch(&lamp, &base).unwrap();
        assert_eq!(measure.atoms().len(), 5);
        assert_eq!(measure.atoms()[0].1, 0.5);
        for (_, p) in &measure.atoms()[1..] {
            assert_eq!(*p, 0.125);
        }
    }

    #[test]
    fn lazy_merges_identity_mass() {
        let base = StepMeasure::uniform_on_generators(&GroupSpec::IntegerLine).unwrap();
        let lazy = base.lazy(0.5).unwrap();
        assert_eq!(lazy.laziness(), 0.5);
        assert_eq!(lazy.atoms().len(), 3);
        let lazier = lazy.lazy(0.5).unwrap();
        assert!((lazier.laziness() - 0.75).abs() <= 1e-15);
        assert_eq!(lazier.atoms().len(), 3);
        assert!(base.lazy(1.0).is_err());
        assert!(base.lazy(-0.1).is_err());
    }

    #[test]
    fn validation_rejects_bad_measures() {
        let spec = GroupSpec::IntegerLine;
        let asymmetric = StepMeasure::new(
            spec.clone(),
            vec![(Element::Line(1), 0.75), (Element::Line(-1), 0.25)],
        );
        assert!(asymmetric.is_err());
        let short = StepMeasure::new(spec.clone(), vec![(Element::Line(1), 0.5)]);
        assert!(short.is_err());
        let duplicate = StepMeasure::new(
            spec.clone(),
            vec![
                (Element::Line(1), 0.25),
                (Element::Line(1), 0.25),
                (Element::Line(-1), 0.5),
            ],
        );
        assert!(duplicate.is_err());
        let negative = StepMeasure::new(
            spec,
            vec![(Element::Line(1), 1.5), (Element::Line(-1), -0.5)],
        );
        assert!(negative.is_err());
    }

    #[test]
    fn sampled_frequencies_match_probabilities() {
        let measure = lamplighter_measure();
        let mut rng = stream(41);
        let trials = 1_000_000usize;
        let mut counts = vec![0usize; measure.atoms().len()];
        for _ in 0..trials {
            let drawn = measure.sample(&mut rng).clone();
            let idx = measure
                .atoms()
                .iter()
                .position(|(e, _)| *e == drawn)
                .unwrap();
            counts[idx] += 1;
        }
        for (idx, (_, p)) in measure.atoms().iter().enumerate() {
            let freq = counts[idx] as f64 / trials as f64;
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            assert!(
                (freq - p).abs() <= 3.0 * se,
                "atom {idx}: freq {freq} vs p {p}"
            );
        }
    }
}
