//! Growth profiles M_h(r) = max |h| over word-length balls, and the
//! lamp-override map used when comparing walks started from related
//! configurations.

use super::function::{HarmonicForm, HarmonicFunction};
use crate::group::{validate, Element, GroupSpec, LengthMode};
use crate::{Error, Result};
use serde::Serialize;

/// M_h(r) bracketed by certified bounds. The two sides agree whenever
/// word lengths are exact for the relevant elements.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GrowthPoint {
    pub r: u64,
    pub lower: f64,
    pub upper: f64,
}

/// Profile of max |h| over the ball of each requested radius.
///
/// Closed forms are used where the shape of `h` allows them:
/// * constants are flat;
/// * the base coordinate changes by at most one per generator and a
///   straight word achieves r, so M(r) = r exactly;
/// * the kernel form has |h(f, z)| = table(z) for every configuration
///   f, and the cheapest element at position z is the lamps-off one
///   with length ‖z‖₁, so M(r) is an exact maximum over the ‖·‖₁ ball;
/// * tabulated functions are profiled over their stored domain, with
///   word-length bounds deciding membership (lower bar: certainly
///   inside; upper bar: possibly inside).
pub fn growth_profile(h: &HarmonicFunction, radii: &[u64]) -> Result<Vec<GrowthPoint>> {
    let mut points = Vec::with_capacity(radii.len());
    for &r in radii {
        let point = match h.form() {
            HarmonicForm::Constant(c) => GrowthPoint {
                r,
                lower: c.abs(),
                upper: c.abs(),
            },
            HarmonicForm::BaseCoordinate => GrowthPoint {
                r,
                lower: r as f64,
                upper: r as f64,
            },
            HarmonicForm::LampSignShiftedKernel(table) => {
                let radius = i64::try_from(r).map_err(|_| {
                    Error::InvalidParameter(format!("radius {r} out of range"))
                })?;
                if radius > table.radius() {
                    return Err(Error::OutOfRange(format!(
                        "radius {r} exceeds the table radius {}",
                        table.radius()
                    )));
                }
                let mut best: f64 = 0.0;
                for x in -radius..=radius {
                    let span = radius - x.abs();
                    for y in -span..=span {
                        best = best.max(table.value(x, y)?);
                    }
                }
                GrowthPoint {
                    r,
                    lower: best,
                    upper: best,
                }
            }
            HarmonicForm::Tabulated(values) => {
                let spec = h.measure().spec();
                let mut certain: f64 = 0.0;
                let mut possible: f64 = 0.0;
                for (key, value) in values {
                    let length = match crate::group::word_length(spec, key, LengthMode::Exact)
                    {
                        Ok(length) => length,
                        Err(_) => crate::group::word_length(spec, key, LengthMode::Bounds)?,
                    };
                    if length.upper() <= r {
                        certain = certain.max(value.abs());
                    }
                    if length.lower() <= r {
                        possible = possible.max(value.abs());
                    }
                }
                GrowthPoint {
                    r,
                    lower: certain,
                    upper: possible,
                }
            }
        };
        points.push(point);
    }
    Ok(points)
}

/// Replace the lamp at `point` with `value`, leaving everything else
/// in place. Equals a left multiplication by a single lamp adjustment,
/// so it moves the word length by at most the cost of one lamp.
pub fn lamp_override(
    spec: &GroupSpec,
    x: &Element,
    point: &Element,
    value: &Element,
) -> Result<Element> {
    let (lamp_spec, base_spec) = match spec {
        GroupSpec::Wreath(l, b) => (l.as_ref(), b.as_ref()),
        other => {
            return Err(Error::Unsupported(format!(
                "lamp override needs a wreath product, got {other}"
            )))
        }
    };
    validate(spec, x)?;
    validate(base_spec, point)?;
    validate(lamp_spec, value)?;
    let w = match x {
        Element::Wreath(w) => w,
        _ => unreachable!("validated wreath element"),
    };
    let mut lamps = w.lamps.clone();
    if crate::group::is_identity(value) {
        lamps.remove(point);
    } else {
        lamps.insert(point.clone(), value.clone());
    }
    Ok(Element::wreath(lamps, w.position.clone()))
}
