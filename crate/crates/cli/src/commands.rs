//! One function per subcommand. Each returns the manifest parameter
//! map together with the rendered table; all randomness is derived
//! from the given seed through the core per-trial stream scheme.

use crate::report::{float, Report};
use crate::Command;
use lamplab_core::entropy::{check_inequality_suite, entropy_sequence, growth_bound_audit};
use lamplab_core::group::{Element, GroupSpec};
use lamplab_core::growth::{
    conditional_entropy_lower_bound, iterated_growth_experiment, visit_count_profile,
};
use lamplab_core::harmonic::{
    growth_profile, kernel_form_residual_scan, residual_with, HarmonicFunction,
};
use lamplab_core::kernel::{build_kernel_table, Normalization};
use lamplab_core::operator::{expansion_audit, verify_derivative_bound, FiniteMarkovOperator};
use lamplab_core::rng::splitmix64;
use lamplab_core::walk::{
    coupled_gluing_experiment, exact_escape_probability, move_or_switch, StepMeasure,
};
use lamplab_core::{Error, Result};
use serde_json::{Map, Value};

/// Maximum exact-distribution support across CLI entry points.
const SUPPORT_CAP: usize = 4_000_000;

pub fn execute(command: &Command, seed: u64) -> Result<(&'static str, Map<String, Value>, Report)> {
    match command {
        Command::Coupling { radius, trials } => coupling(*radius, *trials, seed),
        Command::Kernel {
            radius,
            tol,
            normalization,
        } => kernel(*radius, *tol, normalization),
        Command::HarmonicCheck { group, radius, tol } => harmonic_check(group, *radius, *tol),
        Command::GrowthProfile { group, radius } => growth_profile_command(group, *radius),
        Command::EntropyExact { group, steps } => entropy_exact(group, *steps),
        Command::AuditInequalities { trials, steps } => audit_inequalities(*trials, *steps, seed),
        Command::VisitProfile { group, steps } => visit_profile(group, *steps, seed),
        Command::EntropyGrowth {
            group,
            depth,
            n_max,
            trials,
        } => entropy_growth(group, *depth, *n_max, *trials, seed),
        Command::ExpansionCheck {
            size,
            alpha,
            steps,
            order,
        } => expansion_check(*size, *alpha, *steps, *order),
        Command::BinomialBound { n_max, m_max } => binomial_bound(*n_max, *m_max),
    }
}

/// Uniform generator step on lattices and cyclic lamps; the
/// move-or-switch step on wreath products.
fn walk_measure(spec: &GroupSpec) -> Result<StepMeasure> {
    match spec {
        GroupSpec::Wreath(lamp, base) => move_or_switch(
            &StepMeasure::uniform_on_generators(lamp)?,
            &StepMeasure::uniform_on_generators(base)?,
        ),
        other => StepMeasure::uniform_on_generators(other),
    }
}

fn coupling(radius: u64, trials: u64, seed: u64) -> Result<(&'static str, Map<String, Value>, Report)> {
    if radius == 0 {
        return Err(Error::InvalidParameter("radius must be at least 1".into()));
    }
    let mut radii = Vec::new();
    let mut r = 1u64;
    while r <= radius {
        radii.push(r);
        r = r.saturating_mul(2);
    }
    if *radii.last().unwrap() != radius {
        radii.push(radius);
    }
    let mut report = Report::new(vec!["r", "trials", "estimate", "stderr", "exact"]);
    for r in radii {
        let exact = exact_escape_probability(r)?;
        let mc = coupled_gluing_experiment(r, trials, splitmix64(seed ^ r))?;
        report.push_row(vec![
            Value::from(r),
            Value::from(mc.trials),
            float(mc.estimate),
            float(mc.stderr),
            float(exact),
        ]);
    }
    let mut params = Map::new();
    params.insert("radius".into(), Value::from(radius));
    params.insert("trials".into(), Value::from(trials));
    Ok(("coupling", params, report))
}

fn kernel(radius: i64, tol: f64, normalization: &str) -> Result<(&'static str, Map<String, Value>, Report)> {
    let normalization = Normalization::parse(normalization)?;
    let table = build_kernel_table(radius, tol, normalization)?;
    let mut report = Report::new(vec!["x", "y", "value"]);
    for x in -radius..=radius {
        for y in -radius..=radius {
            report.push_row(vec![
                Value::from(x),
                Value::from(y),
                float(table.value(x, y)?),
            ]);
        }
    }
    let mut params = Map::new();
    params.insert("radius".into(), Value::from(radius));
    params.insert("tol".into(), float(tol));
    params.insert(
        "normalization".into(),
        Value::from(table.normalization().name()),
    );
    Ok(("kernel", params, report))
}

fn harmonic_check(group: &str, radius: i64, tol: f64) -> Result<(&'static str, Map<String, Value>, Report)> {
    if radius < 1 {
        return Err(Error::InvalidParameter("radius must be at least 1".into()));
    }
    let spec = GroupSpec::parse(group)?;
    let (max_residual, states_checked) = match &spec {
        GroupSpec::Wreath(lamp, base)
            if **lamp == GroupSpec::CyclicTwo && **base == GroupSpec::IntegerGrid =>
        {
            let table = build_kernel_table(radius + 1, tol.min(1e-10), Normalization::Shifted)?;
            let measure = walk_measure(&spec)?;
            let h = HarmonicFunction::lamp_sign_shifted_kernel(measure, table)?;
            let states = 2 * (2 * radius + 1) * (2 * radius + 1);
            (kernel_form_residual_scan(&h)?, states as u64)
        }
        GroupSpec::Wreath(lamp, base)
            if **lamp == GroupSpec::CyclicTwo && **base == GroupSpec::IntegerLine =>
        {
            // Sign of the origin lamp times (|n| + ½): harmonic because
            // the origin-switch flips the sign exactly when |n| + ½
            // equals the mean of its neighbours' magnitudes.
            let measure = walk_measure(&spec)?;
            let origin = Element::Line(0);
            let value = |e: &Element| -> Result<f64> {
                let position = match e {
                    Element::Wreath(w) => match &w.position {
                        Element::Line(n) => *n,
                        other => {
                            return Err(Error::Unsupported(format!(
                                "unexpected base position {other:?}"
                            )))
                        }
                    },
                    other => {
                        return Err(Error::Unsupported(format!(
                            "unexpected state {other:?}"
                        )))
                    }
                };
                let sign = match e.lamp_at(&GroupSpec::CyclicTwo, &origin) {
                    Element::Bit(true) => -1.0,
                    _ => 1.0,
                };
                Ok(sign * (position.abs() as f64 + 0.5))
            };
            // The function reads only the origin lamp and the position,
            // so positions in the ball crossed with both origin-lamp
            // states exhaust every residual value.
            let mut worst: f64 = 0.0;
            let mut states = 0u64;
            for position in -radius..=radius {
                for lamp_on in [false, true] {
                    let lamps: std::collections::BTreeMap<Element, Element> = if lamp_on {
                        [(Element::Line(0), Element::Bit(true))].into()
                    } else {
                        Default::default()
                    };
                    let state = Element::wreath(lamps, Element::Line(position));
                    worst = worst.max(residual_with(&measure, value, &state)?);
                    states += 1;
                }
            }
            (worst, states)
        }
        other => {
            return Err(Error::Unsupported(format!(
                "no canonical harmonic function is wired up for {other}"
            )))
        }
    };
    let mut report = Report::new(vec![
        "group",
        "radius",
        "states_checked",
        "max_residual",
        "tol",
        "pass",
    ]);
    report.push_row(vec![
        Value::from(spec.to_string()),
        Value::from(radius),
        Value::from(states_checked),
        float(max_residual),
        float(tol),
        Value::from(max_residual <= tol),
    ]);
    let mut params = Map::new();
    params.insert("group".into(), Value::from(group));
    params.insert("radius".into(), Value::from(radius));
    params.insert("tol".into(), float(tol));
    Ok(("harmonic-check", params, report))
}

fn growth_profile_command(group: &str, radius: u64) -> Result<(&'static str, Map<String, Value>, Report)> {
    if radius == 0 {
        return Err(Error::InvalidParameter("radius must be at least 1".into()));
    }
    let spec = GroupSpec::parse(group)?;
    let h = match &spec {
        GroupSpec::Wreath(lamp, base)
            if **lamp == GroupSpec::CyclicTwo && **base == GroupSpec::IntegerGrid =>
        {
            let table = build_kernel_table(radius as i64, 1e-10, Normalization::Shifted)?;
            HarmonicFunction::lamp_sign_shifted_kernel(walk_measure(&spec)?, table)?
        }
        _ => HarmonicFunction::base_coordinate(walk_measure(&spec)?)?,
    };
    let radii: Vec<u64> = (1..=radius).collect();
    let points = growth_profile(&h, &radii)?;
    let mut report = Report::new(vec!["r", "lower", "upper"]);
    for point in points {
        report.push_row(vec![
            Value::from(point.r),
            float(point.lower),
            float(point.upper),
        ]);
    }
    let mut params = Map::new();
    params.insert("group".into(), Value::from(group));
    params.insert("radius".into(), Value::from(radius));
    Ok(("growth-profile", params, report))
}

fn entropy_exact(group: &str, steps: usize) -> Result<(&'static str, Map<String, Value>, Report)> {
    let spec = GroupSpec::parse(group)?;
    let measure = walk_measure(&spec)?;
    let sequence = entropy_sequence(&measure, steps, SUPPORT_CAP)?;
    let mut report = Report::new(vec!["n", "entropy", "increment"]);
    for (n, entropy) in sequence.entropies.iter().enumerate() {
        let increment = if n == 0 {
            Value::Null
        } else {
            float(sequence.increments[n - 1])
        };
        report.push_row(vec![Value::from(n as u64), float(*entropy), increment]);
    }
    let mut params = Map::new();
    params.insert("group".into(), Value::from(group));
    params.insert("steps".into(), Value::from(steps as u64));
    Ok(("entropy-exact", params, report))
}

fn audit_inequalities(trials: u64, steps: usize, seed: u64) -> Result<(&'static str, Map<String, Value>, Report)> {
    let mut report = Report::new(vec!["check", "n", "trials", "violations", "max_ratio"]);
    for row in check_inequality_suite(trials, seed)? {
        report.push_row(vec![
            Value::from(row.inequality),
            Value::Null,
            Value::from(row.trials),
            Value::from(row.violations),
            float(row.max_ratio),
        ]);
    }
    // Exact growth-bound audit for the signed base coordinate of the
    // line lamplighter.
    let spec = GroupSpec::parse("C2 wr Z")?;
    let measure = walk_measure(&spec)?;
    let coordinate = |e: &Element| -> f64 {
        match e {
            Element::Wreath(w) => match &w.position {
                Element::Line(n) => *n as f64,
                _ => 0.0,
            },
            _ => 0.0,
        }
    };
    for row in growth_bound_audit(&measure, coordinate, steps, SUPPORT_CAP)? {
        report.push_row(vec![
            Value::from("walk-growth-bound"),
            Value::from(row.n as u64),
            Value::from(0u64),
            Value::from(u64::from(!row.holds())),
            float(row.lhs / row.rhs),
        ]);
    }
    let mut params = Map::new();
    params.insert("trials".into(), Value::from(trials));
    params.insert("steps".into(), Value::from(steps as u64));
    Ok(("audit-inequalities", params, report))
}

fn visit_profile(group: &str, steps: u64, seed: u64) -> Result<(&'static str, Map<String, Value>, Report)> {
    let spec = GroupSpec::parse(group)?;
    let profile = visit_count_profile(&spec, steps, seed)?;
    let mut report = Report::new(vec!["x", "y", "count"]);
    for (site, count) in profile.counts() {
        let (x, y) = match site {
            Element::Line(n) => (Value::from(*n), Value::Null),
            Element::Grid(a, b) => (Value::from(*a), Value::from(*b)),
            other => {
                return Err(Error::Unsupported(format!(
                    "unexpected site {other:?}"
                )))
            }
        };
        report.push_row(vec![x, y, Value::from(*count)]);
    }
    let mut params = Map::new();
    params.insert("group".into(), Value::from(group));
    params.insert("steps".into(), Value::from(steps));
    Ok(("visit-profile", params, report))
}

fn entropy_growth(
    group: &str,
    depth: u32,
    n_max: u64,
    trials: u64,
    seed: u64,
) -> Result<(&'static str, Map<String, Value>, Report)> {
    let spec = GroupSpec::parse(group)?;
    let mut lengths = Vec::new();
    let mut n = 256u64.min(n_max);
    while n <= n_max {
        lengths.push(n);
        n = n.saturating_mul(2);
    }
    if lengths.is_empty() {
        lengths.push(n_max);
    }
    let grid_lamplighter = matches!(
        &spec,
        GroupSpec::Wreath(lamp, base)
            if **lamp == GroupSpec::CyclicTwo && **base == GroupSpec::IntegerGrid
    );
    let mut report = Report::new(vec!["n", "estimate", "stderr", "reference", "ratio"]);
    if grid_lamplighter {
        for row in iterated_growth_experiment(depth, &lengths, trials, seed)? {
            report.push_row(vec![
                Value::from(row.n),
                float(row.estimate),
                float(row.stderr),
                float(row.reference),
                float(row.ratio),
            ]);
        }
    } else {
        if depth != 1 {
            return Err(Error::Unsupported(
                "iterated depths are wired up for the grid lamplighter only".into(),
            ));
        }
        let (lamp, base) = match &spec {
            GroupSpec::Wreath(lamp, base) => (lamp.as_ref(), base.as_ref()),
            other => {
                return Err(Error::Unsupported(format!(
                    "entropy growth needs a wreath product, got {other}"
                )))
            }
        };
        for &length in &lengths {
            let level_seed = splitmix64(seed ^ (1u64 << 56) ^ length);
            let estimate =
                conditional_entropy_lower_bound(lamp, base, length, trials, level_seed)?;
            let reference = match base {
                GroupSpec::IntegerLine => (length as f64).sqrt(),
                _ => length as f64 / (length as f64).ln(),
            };
            report.push_row(vec![
                Value::from(length),
                float(estimate.mean),
                float(estimate.stderr),
                float(reference),
                float(estimate.mean / reference),
            ]);
        }
    }
    let mut params = Map::new();
    params.insert("group".into(), Value::from(group));
    params.insert("depth".into(), Value::from(depth));
    params.insert("n_max".into(), Value::from(n_max));
    params.insert("trials".into(), Value::from(trials));
    Ok(("entropy-growth", params, report))
}

fn expansion_check(
    size: usize,
    alpha: Option<f64>,
    steps: usize,
    order: usize,
) -> Result<(&'static str, Map<String, Value>, Report)> {
    let operator = FiniteMarkovOperator::cycle_walk(size)?;
    let alphas = match alpha {
        Some(a) => vec![a],
        None => vec![0.25, 0.5, 0.75],
    };
    let mut ks: Vec<usize> = [0usize, 1, 2, 5, 10, 20, 40]
        .into_iter()
        .filter(|&k| k <= steps)
        .collect();
    if ks.last() != Some(&steps) {
        ks.push(steps);
    }
    let ms: Vec<usize> = (0..=order).collect();
    let rows = expansion_audit(&operator, &alphas, &ks, &ms)?;
    let mut report = Report::new(vec![
        "identity",
        "size",
        "k",
        "m",
        "alpha",
        "max_discrepancy",
    ]);
    for row in rows {
        report.push_row(vec![
            Value::from(row.identity),
            Value::from(row.size as u64),
            Value::from(row.k as u64),
            Value::from(row.m as u64),
            float(row.alpha),
            float(row.max_discrepancy),
        ]);
    }
    let mut params = Map::new();
    params.insert("size".into(), Value::from(size as u64));
    params.insert(
        "alpha".into(),
        Value::Array(alphas.iter().map(|&a| float(a)).collect()),
    );
    params.insert("steps".into(), Value::from(steps as u64));
    params.insert("order".into(), Value::from(order as u64));
    Ok(("expansion-check", params, report))
}

fn binomial_bound(n_max: usize, m_max: usize) -> Result<(&'static str, Map<String, Value>, Report)> {
    let p_set: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let result = verify_derivative_bound(n_max, m_max, &p_set)?;
    let mut report = Report::new(vec![
        "checked",
        "violations",
        "max_ratio",
        "tightest_n",
        "tightest_m",
        "tightest_p",
    ]);
    report.push_row(vec![
        Value::from(result.checked),
        Value::from(result.violations),
        float(result.max_ratio),
        Value::from(result.tightest_n as u64),
        Value::from(result.tightest_m as u64),
        float(result.tightest_p),
    ]);
    let mut params = Map::new();
    params.insert("n_max".into(), Value::from(n_max as u64));
    params.insert("m_max".into(), Value::from(m_max as u64));
    Ok(("binomial-bound", params, report))
}
