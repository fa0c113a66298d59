//! Elements, the group law, and generator sets.

use super::GroupSpec;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// A group element. The variant must match the shape of the [`GroupSpec`]
/// it is used with; operations validate this as they recurse.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    /// Element of `C2`.
    Bit(bool),
    /// Element of `Z`.
    Line(i64),
    /// Element of `Z2`.
    Grid(i64, i64),
    /// Element of a wreath product.
    Wreath(Box<WreathElement>),
}

/// Element of `L wr B`: a finitely supported lamp configuration over base
/// points plus a base position. Only non-identity lamp values are stored,
/// keyed by base point in `BTreeMap` order, so equal group elements are
/// structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct WreathElement {
    pub lamps: BTreeMap<Element, Element>,
    pub position: Element,
}

impl Element {
    pub fn wreath(lamps: BTreeMap<Element, Element>, position: Element) -> Self {
        Element::Wreath(Box::new(WreathElement { lamps, position }))
    }

    /// Base position of a wreath element.
    pub fn position(&self) -> Option<&Element> {
        match self {
            Element::Wreath(w) => Some(&w.position),
            _ => None,
        }
    }

    /// Lamp configuration of a wreath element.
    pub fn lamps(&self) -> Option<&BTreeMap<Element, Element>> {
        match self {
            Element::Wreath(w) => Some(&w.lamps),
            _ => None,
        }
    }

    /// Lamp value at `point` (identity of `lamp_spec` when absent).
    pub fn lamp_at(&self, lamp_spec: &GroupSpec, point: &Element) -> Element {
        match self {
            Element::Wreath(w) => w
                .lamps
                .get(point)
                .cloned()
                .unwrap_or_else(|| identity(lamp_spec)),
            _ => identity(lamp_spec),
        }
    }
}

impl Default for Element {
    fn default() -> Self {
        Element::Line(0)
    }
}

/// Identity element of `spec`.
pub fn identity(spec: &GroupSpec) -> Element {
    match spec {
        GroupSpec::CyclicTwo => Element::Bit(false),
        GroupSpec::IntegerLine => Element::Line(0),
        GroupSpec::IntegerGrid => Element::Grid(0, 0),
        GroupSpec::Wreath(_, base) => Element::wreath(BTreeMap::new(), identity(base)),
    }
}

/// Structural identity test; sound because lamp maps are canonical.
pub fn is_identity(elem: &Element) -> bool {
    match elem {
        Element::Bit(b) => !b,
        Element::Line(n) => *n == 0,
        Element::Grid(x, y) => *x == 0 && *y == 0,
        Element::Wreath(w) => w.lamps.is_empty() && is_identity(&w.position),
    }
}

/// Check that `elem` is a canonical element of `spec`.
pub fn validate(spec: &GroupSpec, elem: &Element) -> Result<()> {
    match (spec, elem) {
        (GroupSpec::CyclicTwo, Element::Bit(_)) => Ok(()),
        (GroupSpec::IntegerLine, Element::Line(_)) => Ok(()),
        (GroupSpec::IntegerGrid, Element::Grid(..)) => Ok(()),
        (GroupSpec::Wreath(lamp, base), Element::Wreath(w)) => {
            validate(base, &w.position)?;
            for (point, value) in &w.lamps {
                validate(base, point)?;
                validate(lamp, value)?;
                if is_identity(value) {
                    return Err(Error::mismatch(
                        spec,
                        "lamp map stores an identity value (non-canonical)",
                    ));
                }
            }
            Ok(())
        }
        _ => Err(Error::mismatch(
            spec,
            format!("element shape {elem:?} does not match"),
        )),
    }
}

fn checked_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b)
        .ok_or_else(|| Error::Numeric("integer overflow in base coordinate".into()))
}

/// Group product `a · b` in `spec`.
pub fn multiply(spec: &GroupSpec, a: &Element, b: &Element) -> Result<Element> {
    match (spec, a, b) {
        (GroupSpec::CyclicTwo, Element::Bit(x), Element::Bit(y)) => Ok(Element::Bit(x ^ y)),
        (GroupSpec::IntegerLine, Element::Line(x), Element::Line(y)) => {
            Ok(Element::Line(checked_add(*x, *y)?))
        }
        (GroupSpec::IntegerGrid, Element::Grid(x1, y1), Element::Grid(x2, y2)) => {
            Ok(Element::Grid(checked_add(*x1, *x2)?, checked_add(*y1, *y2)?))
        }
        (GroupSpec::Wreath(lamp, base), Element::Wreath(wa), Element::Wreath(wb)) => {
            // (ω, g)(ξ, k) = (x ↦ ω(x) ξ(g⁻¹x), gk): every lamp of ξ at p
            // lands at g·p and multiplies whatever ω already has there.
            let mut lamps = wa.lamps.clone();
            for (point, value) in &wb.lamps {
                let shifted = multiply(base, &wa.position, point)?;
                let merged = match lamps.get(&shifted) {
                    Some(existing) => multiply(lamp, existing, value)?,
                    None => value.clone(),
                };
                if is_identity(&merged) {
                    lamps.remove(&shifted);
                } else {
                    lamps.insert(shifted, merged);
                }
            }
            let position = multiply(base, &wa.position, &wb.position)?;
            Ok(Element::wreath(lamps, position))
        }
        _ => Err(Error::mismatch(spec, "operands do not match the group")),
    }
}

/// Inverse of `a` in `spec`.
pub fn inverse(spec: &GroupSpec, a: &Element) -> Result<Element> {
    match (spec, a) {
        (GroupSpec::CyclicTwo, Element::Bit(x)) => Ok(Element::Bit(*x)),
        (GroupSpec::IntegerLine, Element::Line(x)) => Ok(Element::Line(
            x.checked_neg()
                .ok_or_else(|| Error::Numeric("negation overflow".into()))?,
        )),
        (GroupSpec::IntegerGrid, Element::Grid(x, y)) => Ok(Element::Grid(
            x.checked_neg()
                .ok_or_else(|| Error::Numeric("negation overflow".into()))?,
            y.checked_neg()
                .ok_or_else(|| Error::Numeric("negation overflow".into()))?,
        )),
        (GroupSpec::Wreath(lamp, base), Element::Wreath(w)) => {
            // (ω, g)⁻¹ = (x ↦ ω(gx)⁻¹, g⁻¹): lamp at p moves to g⁻¹·p.
            let pos_inv = inverse(base, &w.position)?;
            let mut lamps = BTreeMap::new();
            for (point, value) in &w.lamps {
                let shifted = multiply(base, &pos_inv, point)?;
                lamps.insert(shifted, inverse(lamp, value)?);
            }
            Ok(Element::wreath(lamps, pos_inv))
        }
        _ => Err(Error::mismatch(spec, "operand does not match the group")),
    }
}

/// A generator of a wreath product, classified by what it does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `(𝟙, u)` for a base generator `u`: moves the position.
    Move(Element),
    /// `(δ_s at the base identity, 1)` for a lamp generator `s`: multiplies
    /// the lamp at the current position.
    Switch(Element),
}

impl Generator {
    /// The generator as a group element of `spec`.
    pub fn to_element(&self, spec: &GroupSpec) -> Result<Element> {
        let (lamp, base) = spec.expect_wreath()?;
        match self {
            Generator::Move(u) => {
                validate(base, u)?;
                Ok(Element::wreath(BTreeMap::new(), u.clone()))
            }
            Generator::Switch(s) => {
                validate(lamp, s)?;
                if is_identity(s) {
                    return Err(Error::InvalidParameter(
                        "switch generator must be non-identity".into(),
                    ));
                }
                let mut lamps = BTreeMap::new();
                lamps.insert(identity(base), s.clone());
                Ok(Element::wreath(lamps, identity(base)))
            }
        }
    }
}

/// The standard generating set of `spec`, as group elements.
///
/// Lattices get unit steps, `C2` its flip, and a wreath product the union
/// of switches `(δ_s, 1)` over lamp generators and moves `(𝟙, u)` over
/// base generators. The set is closed under inversion at every level.
pub fn standard_generators(spec: &GroupSpec) -> Vec<Element> {
    match spec {
        GroupSpec::CyclicTwo => vec![Element::Bit(true)],
        GroupSpec::IntegerLine => vec![Element::Line(1), Element::Line(-1)],
        GroupSpec::IntegerGrid => vec![
            Element::Grid(1, 0),
            Element::Grid(-1, 0),
            Element::Grid(0, 1),
            Element::Grid(0, -1),
        ],
        GroupSpec::Wreath(..) => wreath_generators(spec)
            .expect("wreath spec")
            .into_iter()
            .map(|g| g.to_element(spec).expect("valid generator"))
            .collect(),
    }
}

/// The standard generators of a wreath product, with their classification.
pub fn wreath_generators(spec: &GroupSpec) -> Result<Vec<Generator>> {
    let (lamp, base) = spec.expect_wreath()?;
    let mut out = Vec::new();
    for s in standard_generators(lamp) {
        out.push(Generator::Switch(s));
    }
    for u in standard_generators(base) {
        out.push(Generator::Move(u));
    }
    Ok(out)
}
