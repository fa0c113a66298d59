//! Word metrics with respect to the standard generating sets.
//!
//! For a lamplighter element over a lattice base the word length splits
//! into switch cost (the lamp values' own word lengths, paid at their
//! sites) plus travel cost (a shortest tour from the origin through the
//! support, ending at the final position). On the line base the optimal
//! tour is closed form: with −A = min(supp ∪ {0, n}) and
//! B = max(supp ∪ {0, n}),
//!
//! ```text
//! travel = 2A + 2B − |n|
//! ```
//!
//! (sweep the cheaper side first). On the grid base the tour is a small
//! path-TSP, solved exactly by brute force for at most eight lamp sites
//! and sandwiched by bounds otherwise. A breadth-first search over the
//! Cayley graph serves as the model-independent oracle.

use super::element::{identity, multiply, standard_generators, validate, Element};
use super::GroupSpec;
use crate::{Error, Result};
use std::collections::{HashMap, VecDeque};

/// How to compute a word length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthMode {
    /// Closed-form length on `C2 wr Z` only.
    ExactLine,
    /// Exact length where a closed form or a small exact tour applies:
    /// atoms, line bases, and grid bases with at most eight lamp sites
    /// (lamp values must themselves be exactly measurable).
    Exact,
    /// A certified sandwich `(lower, upper)` for wreath products over a
    /// lattice base.
    Bounds,
    /// Breadth-first search from the identity, capped at this radius.
    Bfs { max_radius: u64 },
}

/// Result of a word-length computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordLength {
    Exact(u64),
    Bounds { lower: u64, upper: u64 },
}

impl WordLength {
    /// The exact value, if this is one.
    pub fn exact(self) -> Option<u64> {
        match self {
            WordLength::Exact(n) => Some(n),
            WordLength::Bounds { .. } => None,
        }
    }

    /// Best available lower bound.
    pub fn lower(self) -> u64 {
        match self {
            WordLength::Exact(n) => n,
            WordLength::Bounds { lower, .. } => lower,
        }
    }

    /// Best available upper bound.
    pub fn upper(self) -> u64 {
        match self {
            WordLength::Exact(n) => n,
            WordLength::Bounds { upper, .. } => upper,
        }
    }
}

/// Word length of `elem` in `spec` with respect to the standard
/// generators, computed per `mode`.
pub fn word_length(spec: &GroupSpec, elem: &Element, mode: LengthMode) -> Result<WordLength> {
    validate(spec, elem)?;
    match mode {
        LengthMode::ExactLine => {
            let is_c2_line = matches!(
                spec,
                GroupSpec::Wreath(l, b)
                    if **l == GroupSpec::CyclicTwo && **b == GroupSpec::IntegerLine
            );
            if !is_c2_line {
                return Err(Error::Unsupported(format!(
                    "exact-line length requires C2 wr Z, got {spec}"
                )));
            }
            Ok(WordLength::Exact(exact_length(spec, elem)?))
        }
        LengthMode::Exact => Ok(WordLength::Exact(exact_length(spec, elem)?)),
        LengthMode::Bounds => {
            let (lower, upper) = length_bounds(spec, elem)?;
            Ok(WordLength::Bounds { lower, upper })
        }
        LengthMode::Bfs { max_radius } => Ok(WordLength::Exact(bfs_length(spec, elem, max_radius)?)),
    }
}

/// Exact lattice / atom length.
fn atom_length(elem: &Element) -> Result<u64> {
    match elem {
        Element::Bit(b) => Ok(*b as u64),
        Element::Line(n) => Ok(n.unsigned_abs()),
        Element::Grid(x, y) => Ok(x.unsigned_abs() + y.unsigned_abs()),
        Element::Wreath(_) => Err(Error::Unsupported(
            "atom length called on a wreath element".into(),
        )),
    }
}

fn base_distance(a: &Element, b: &Element) -> u64 {
    match (a, b) {
        (Element::Line(x), Element::Line(y)) => x.abs_diff(*y),
        (Element::Grid(x1, y1), Element::Grid(x2, y2)) => x1.abs_diff(*x2) + y1.abs_diff(*y2),
        _ => unreachable!("base distance is only used on lattice elements"),
    }
}

fn exact_length(spec: &GroupSpec, elem: &Element) -> Result<u64> {
    match spec {
        GroupSpec::CyclicTwo | GroupSpec::IntegerLine | GroupSpec::IntegerGrid => {
            atom_length(elem)
        }
        GroupSpec::Wreath(lamp, base) => {
            let w = match elem {
                Element::Wreath(w) => w,
                _ => return Err(Error::mismatch(spec, "expected a wreath element")),
            };
            let mut switch_cost = 0u64;
            for value in w.lamps.values() {
                switch_cost += exact_length(lamp, value)?;
            }
            let travel = match base.as_ref() {
                GroupSpec::IntegerLine => line_travel(w.lamps.keys(), &w.position),
                GroupSpec::IntegerGrid => {
                    let sites: Vec<&Element> = w.lamps.keys().collect();
                    if sites.len() > 8 {
                        return Err(Error::Unsupported(format!(
                            "exact grid tour limited to 8 lamp sites, element has {}",
                            sites.len()
                        )));
                    }
                    grid_travel_exact(&sites, &w.position)
                }
                other => {
                    return Err(Error::Unsupported(format!(
                        "exact length unsupported for base {other}"
                    )));
                }
            };
            Ok(switch_cost + travel)
        }
    }
}

/// Optimal line travel: visit every support point starting at 0, end at n.
fn line_travel<'a>(support: impl Iterator<Item = &'a Element>, position: &Element) -> u64 {
    let n = match position {
        Element::Line(n) => *n,
        _ => unreachable!(),
    };
    let mut lo = 0i64.min(n);
    let mut hi = 0i64.max(n);
    for p in support {
        if let Element::Line(p) = p {
            lo = lo.min(*p);
            hi = hi.max(*p);
        }
    }
    let a = (-lo) as u64;
    let b = hi as u64;
    2 * a + 2 * b - n.unsigned_abs()
}

/// Exact shortest path-tour on the grid over at most eight sites.
fn grid_travel_exact(sites: &[&Element], position: &Element) -> u64 {
    let origin = Element::Grid(0, 0);
    if sites.is_empty() {
        return base_distance(&origin, position);
    }
    let mut order: Vec<usize> = (0..sites.len()).collect();
    let mut best = u64::MAX;
    permute(&mut order, 0, &mut |perm| {
        let mut cost = base_distance(&origin, sites[perm[0]]);
        for w in perm.windows(2) {
            cost += base_distance(sites[w[0]], sites[w[1]]);
        }
        cost += base_distance(sites[*perm.last().unwrap()], position);
        best = best.min(cost);
    });
    best
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Certified `(lower, upper)` bounds for wreath products over a lattice
/// base. Lower: per-lamp lower costs plus the worst detour through a
/// single required site. Upper: per-lamp upper costs plus a greedy
/// nearest-neighbour tour.
fn length_bounds(spec: &GroupSpec, elem: &Element) -> Result<(u64, u64)> {
    match spec {
        GroupSpec::CyclicTwo | GroupSpec::IntegerLine | GroupSpec::IntegerGrid => {
            let n = atom_length(elem)?;
            Ok((n, n))
        }
        GroupSpec::Wreath(lamp, base) => {
            if !base.is_lattice() {
                return Err(Error::Unsupported(format!(
                    "length bounds require a lattice base, got {base}"
                )));
            }
            let w = match elem {
                Element::Wreath(w) => w,
                _ => return Err(Error::mismatch(spec, "expected a wreath element")),
            };
            let mut switch_lower = 0u64;
            let mut switch_upper = 0u64;
            for value in w.lamps.values() {
                let (lo, hi) = length_bounds(lamp, value)?;
                switch_lower += lo;
                switch_upper += hi;
            }
            let origin = identity(base);
            let mut travel_lower = base_distance(&origin, &w.position);
            for p in w.lamps.keys() {
                travel_lower =
                    travel_lower.max(base_distance(&origin, p) + base_distance(p, &w.position));
            }
            // Greedy nearest-neighbour tour; ties broken by key order so
            // the bound is deterministic.
            let mut remaining: Vec<&Element> = w.lamps.keys().collect();
            let mut here = origin;
            let mut travel_upper = 0u64;
            while !remaining.is_empty() {
                let (idx, _) = remaining
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, p)| (base_distance(&here, p), (**p).clone()))
                    .unwrap();
                let next = remaining.swap_remove(idx);
                travel_upper += base_distance(&here, next);
                here = next.clone();
            }
            travel_upper += base_distance(&here, &w.position);
            Ok((switch_lower + travel_lower, switch_upper + travel_upper))
        }
    }
}

/// Distances from the identity to every element within `radius`.
///
/// `node_cap` bounds the number of visited elements; exceeding it is an
/// error so callers never silently truncate a ball.
pub fn bfs_ball(
    spec: &GroupSpec,
    radius: u64,
    node_cap: usize,
) -> Result<HashMap<Element, u64>> {
    let gens = standard_generators(spec);
    let mut dist: HashMap<Element, u64> = HashMap::new();
    let mut queue = VecDeque::new();
    let id = identity(spec);
    dist.insert(id.clone(), 0);
    queue.push_back(id);
    while let Some(current) = queue.pop_front() {
        let d = dist[&current];
        if d == radius {
            continue;
        }
        for g in &gens {
            let next = multiply(spec, &current, g)?;
            if !dist.contains_key(&next) {
                if dist.len() >= node_cap {
                    return Err(Error::CapExceeded(format!(
                        "BFS ball of radius {radius} exceeds {node_cap} elements"
                    )));
                }
                dist.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
        }
    }
    Ok(dist)
}

fn bfs_length(spec: &GroupSpec, elem: &Element, max_radius: u64) -> Result<u64> {
    // Plain BFS outward from the identity; the ball caps make this safe
    // for exploratory use and tests.
    let gens = standard_generators(spec);
    let mut dist: HashMap<Element, u64> = HashMap::new();
    let mut queue = VecDeque::new();
    let id = identity(spec);
    if *elem == id {
        return Ok(0);
    }
    dist.insert(id.clone(), 0);
    queue.push_back(id);
    while let Some(current) = queue.pop_front() {
        let d = dist[&current];
        if d == max_radius {
            continue;
        }
        for g in &gens {
            let next = multiply(spec, &current, g)?;
            if !dist.contains_key(&next) {
                if next == *elem {
                    return Ok(d + 1);
                }
                dist.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
        }
    }
    Err(Error::CapExceeded(format!(
        "element not found within BFS radius {max_radius}"
    )))
}
