//! Harmonic functions for the walks in this crate, with exact and
//! tabulated evaluation plus pointwise harmonicity residuals.

use crate::group::{multiply, validate, Element, GroupSpec};
use crate::kernel::{KernelTable, Normalization};
use crate::walk::StepMeasure;
use crate::{Error, Result};
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// The supported functional forms.
pub enum HarmonicForm {
    /// Constant function.
    Constant(f64),
    /// Signed first coordinate of the base position.
    BaseCoordinate,
    /// ±(a(z) + ½) on the grid lamplighter: the sign is the state of
    /// the lamp at the base origin, the magnitude is the origin-shifted
    /// potential-kernel table value at the current position. The shift
    /// by ½ is exactly what makes the origin defect of the kernel
    /// cancel the sign flip of the switch step.
    LampSignShiftedKernel(KernelTable),
    /// Explicit value table over part of the group.
    Tabulated(BTreeMap<Element, f64>),
}

/// A function paired with the step measure it is claimed harmonic for.
pub struct HarmonicFunction {
    form: HarmonicForm,
    measure: StepMeasure,
}

fn lamp_sign(state: &Element, point: &Element) -> Result<f64> {
    match state {
        Element::Wreath(w) => match w.lamps.get(point) {
            None => Ok(1.0),
            Some(Element::Bit(true)) => Ok(-1.0),
            Some(other) => Err(Error::Unsupported(format!(
                "sign undefined for lamp value {other:?}"
            ))),
        },
        other => Err(Error::Unsupported(format!(
            "expected a wreath element, got {other:?}"
        ))),
    }
}

impl HarmonicFunction {
    pub fn constant(measure: StepMeasure, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "constant value {value} is not finite"
            )));
        }
        Ok(HarmonicFunction {
            form: HarmonicForm::Constant(value),
            measure,
        })
    }

    /// First coordinate of the base position. Harmonic for every
    /// measure in this crate because step measures are symmetric.
    pub fn base_coordinate(measure: StepMeasure) -> Result<Self> {
        let base = match measure.spec() {
            GroupSpec::IntegerLine | GroupSpec::IntegerGrid => measure.spec(),
            GroupSpec::Wreath(_, base) => base.as_ref(),
            other => {
                return Err(Error::Unsupported(format!(
                    "no signed base coordinate on {other}"
                )))
            }
        };
        match base {
            GroupSpec::IntegerLine | GroupSpec::IntegerGrid => Ok(HarmonicFunction {
                form: HarmonicForm::BaseCoordinate,
                measure,
            }),
            other => Err(Error::Unsupported(format!(
                "no signed base coordinate on base {other}"
            ))),
        }
    }

    /// The unbounded slowly-growing harmonic function on `C2 wr Z2`
    /// under the move-or-switch walk. Requires the origin-shifted
    /// table: with any other normalization the switch step at the
    /// origin breaks harmonicity.
    pub fn lamp_sign_shifted_kernel(measure: StepMeasure, table: KernelTable) -> Result<Self> {
        let is_grid_lamplighter = matches!(
            measure.spec(),
            GroupSpec::Wreath(l, b)
                if **l == GroupSpec::CyclicTwo && **b == GroupSpec::IntegerGrid
        );
        if !is_grid_lamplighter {
            return Err(Error::Unsupported(format!(
                "the kernel form lives on C2 wr Z2, not {}",
                measure.spec()
            )));
        }
        if table.normalization() != Normalization::Shifted {
            return Err(Error::InvalidParameter(
                "the kernel form needs the origin-shifted table (normalization \"shifted\")"
                    .into(),
            ));
        }
        Ok(HarmonicFunction {
            form: HarmonicForm::LampSignShiftedKernel(table),
            measure,
        })
    }

    /// An explicit value table. Keys are validated against the walk's
    /// group at construction.
    pub fn tabulated(measure: StepMeasure, values: BTreeMap<Element, f64>) -> Result<Self> {
        for (key, value) in &values {
            validate(measure.spec(), key)?;
            if !value.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "tabulated value {value} is not finite"
                )));
            }
        }
        Ok(HarmonicFunction {
            form: HarmonicForm::Tabulated(values),
            measure,
        })
    }

    pub fn measure(&self) -> &StepMeasure {
        &self.measure
    }

    pub fn form(&self) -> &HarmonicForm {
        &self.form
    }

    pub fn evaluate(&self, x: &Element) -> Result<f64> {
        match &self.form {
            HarmonicForm::Constant(c) => Ok(*c),
            HarmonicForm::BaseCoordinate => {
                let position = crate::walk::base_position(x);
                match position {
                    Element::Line(n) => Ok(*n as f64),
                    Element::Grid(a, _) => Ok(*a as f64),
                    other => Err(Error::Unsupported(format!(
                        "no signed coordinate for {other:?}"
                    ))),
                }
            }
            HarmonicForm::LampSignShiftedKernel(table) => {
                let sign = lamp_sign(x, &Element::Grid(0, 0))?;
                let (px, py) = match crate::walk::base_position(x) {
                    Element::Grid(a, b) => (*a, *b),
                    other => {
                        return Err(Error::Unsupported(format!(
                            "expected a grid position, got {other:?}"
                        )))
                    }
                };
                Ok(sign * table.value(px, py)?)
            }
            HarmonicForm::Tabulated(values) => values.get(x).copied().ok_or_else(|| {
                Error::OutOfRange("element outside the tabulated domain".into())
            }),
        }
    }

    /// |E[h(x·S)] − h(x)| for one step S of the walk.
    pub fn residual(&self, x: &Element) -> Result<f64> {
        residual_with(&self.measure, |e| self.evaluate(e), x)
    }

    /// Machine-readable description (form, group, table parameters).
    pub fn describe(&self) -> Value {
        let group = self.measure.spec().to_string();
        match &self.form {
            HarmonicForm::Constant(c) => json!({
                "form": "constant",
                "group": group,
                "value": c,
            }),
            HarmonicForm::BaseCoordinate => json!({
                "form": "base-coordinate",
                "group": group,
            }),
            HarmonicForm::LampSignShiftedKernel(table) => json!({
                "form": "lamp-sign-shifted-kernel",
                "group": group,
                "table_radius": table.radius(),
                "normalization": table.normalization().name(),
                "accuracy": table.accuracy(),
            }),
            HarmonicForm::Tabulated(values) => json!({
                "form": "tabulated",
                "group": group,
                "entries": values.len(),
            }),
        }
    }
}

/// |E[h(x·S)] − h(x)| for an arbitrary function of the group.
pub fn residual_with(
    measure: &StepMeasure,
    h: impl Fn(&Element) -> Result<f64>,
    x: &Element,
) -> Result<f64> {
    let mut expected = 0.0;
    for (atom, p) in measure.atoms() {
        expected += p * h(&multiply(measure.spec(), x, atom)?)?;
    }
    Ok((expected - h(x)?).abs())
}

/// Max harmonicity residual of the kernel-form function over all grid
/// positions with ‖z‖_∞ < `table radius` and both origin-lamp states.
///
/// The function reads only the origin lamp and the position, and a step
/// flips only the lamp under the lamplighter, so these states exhaust
/// every residual value the full group can produce.
pub fn kernel_form_residual_scan(h: &HarmonicFunction) -> Result<f64> {
    let table = match h.form() {
        HarmonicForm::LampSignShiftedKernel(table) => table,
        _ => {
            return Err(Error::Unsupported(
                "the residual scan applies to the kernel form".into(),
            ))
        }
    };
    let radius = table.radius();
    let mut worst: f64 = 0.0;
    for on in [false, true] {
        let lamps: BTreeMap<Element, Element> = if on {
            [(Element::Grid(0, 0), Element::Bit(true))].into()
        } else {
            BTreeMap::new()
        };
        for x in -(radius - 1)..=(radius - 1) {
            for y in -(radius - 1)..=(radius - 1) {
                let state = Element::wreath(lamps.clone(), Element::Grid(x, y));
                worst = worst.max(h.residual(&state)?);
            }
        }
    }
    Ok(worst)
}
