//! Circuit steps, circuit walks, distances and diameters.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{is_circuit, CircuitSet, CircuitVerdict};
use crate::error::{Error, Result};
use crate::linalg::{Rational, RationalVector};
use crate::polytope::HPolytope;

/// Default BFS depth for distance queries.
pub const DEFAULT_DEPTH_LIMIT: usize = 4;

/// One maximal step `to = from + alpha * direction`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkStep {
    pub from_point: RationalVector,
    /// Primitive integer direction, signed as travelled.
    pub direction: RationalVector,
    pub alpha: Rational,
    pub to_point: RationalVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    pub points: Vec<RationalVector>,
    pub steps: Vec<WalkStep>,
}

impl Walk {
    pub fn trivial(x: RationalVector) -> Self {
        Walk {
            points: vec![x],
            steps: Vec::new(),
        }
    }

    /// Builds a walk from its points, deriving each direction and length.
    pub fn from_points(points: Vec<RationalVector>) -> Self {
        let steps = points
            .windows(2)
            .map(|w| {
                let d = w[1].sub(&w[0]);
                let dir = d.primitive();
                let i = dir.0.iter().position(|x| !x.is_zero()).unwrap_or(0);
                let alpha = if dir.is_zero() {
                    Rational::zero()
                } else {
                    &d[i] / &dir[i]
                };
                WalkStep {
                    from_point: w[0].clone(),
                    direction: dir,
                    alpha,
                    to_point: w[1].clone(),
                }
            })
            .collect();
        Walk { points, steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> &RationalVector {
        &self.points[0]
    }

    pub fn end(&self) -> &RationalVector {
        self.points.last().expect("walk has at least one point")
    }

    pub fn push(&mut self, step: WalkStep) {
        self.points.push(step.to_point.clone());
        self.steps.push(step);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Result of [`validate_walk`]: `violation` names the first failing step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkCheck {
    pub valid: bool,
    pub violation: Option<(usize, String)>,
}

impl WalkCheck {
    fn ok() -> Self {
        WalkCheck {
            valid: true,
            violation: None,
        }
    }

    fn fail(i: usize, why: impl Into<String>) -> Self {
        WalkCheck {
            valid: false,
            violation: Some((i, why.into())),
        }
    }
}

/// Maximal step from `x` along the circuit `g`.
pub fn circuit_step(p: &HPolytope, x: &RationalVector, g: &RationalVector) -> Result<WalkStep> {
    if !p.contains(x)? {
        return Err(Error::NotInPolytope);
    }
    if !is_circuit(p, g)?.is_circuit() {
        return Err(Error::NotACircuit);
    }
    step_unchecked(p, x, g)
}

/// [`circuit_step`] for a direction already certified by the caller.
pub fn step_unchecked(p: &HPolytope, x: &RationalVector, g: &RationalVector) -> Result<WalkStep> {
    let dir = g.primitive();
    let alpha = p.max_step_unchecked(x, &dir)?.ok_or(Error::NoStep)?;
    let to_point = x.add_scaled(&alpha, &dir);
    Ok(WalkStep {
        from_point: x.clone(),
        direction: dir,
        alpha,
        to_point,
    })
}

/// Checks every point lies in `P` and every transition is a maximal
/// positive step along a circuit.
pub fn validate_walk(p: &HPolytope, w: &Walk) -> Result<WalkCheck> {
    if w.points.is_empty() {
        return Ok(WalkCheck::fail(0, "walk has no points"));
    }
    if w.points.len() != w.steps.len() + 1 {
        return Ok(WalkCheck::fail(0, "point and step counts disagree"));
    }
    for (i, x) in w.points.iter().enumerate() {
        if !p.contains(x)? {
            return Ok(WalkCheck::fail(i, "point outside the polytope"));
        }
    }
    for (i, s) in w.steps.iter().enumerate() {
        if s.from_point != w.points[i] || s.to_point != w.points[i + 1] {
            return Ok(WalkCheck::fail(
                i,
                "step endpoints differ from the point sequence",
            ));
        }
        if !s.alpha.is_positive() {
            return Ok(WalkCheck::fail(i, "non-positive step length"));
        }
        if s.from_point.add_scaled(&s.alpha, &s.direction) != s.to_point {
            return Ok(WalkCheck::fail(
                i,
                "to_point != from_point + alpha * direction",
            ));
        }
        if s.direction.is_zero() || !is_circuit(p, &s.direction)?.is_circuit() {
            return Ok(WalkCheck::fail(i, "direction is not a circuit"));
        }
        match p.max_step_unchecked(&s.from_point, &s.direction)? {
            Some(a) if a == s.alpha => {}
            _ => return Ok(WalkCheck::fail(i, "step is not maximal")),
        }
    }
    Ok(WalkCheck::ok())
}

/// Whether `y` is reached from `x` by one circuit step.
pub fn one_step(p: &HPolytope, x: &RationalVector, y: &RationalVector) -> Result<bool> {
    if !p.contains(x)? || !p.contains(y)? {
        return Err(Error::NotInPolytope);
    }
    Ok(one_step_unchecked(p, x, y))
}

pub(crate) fn one_step_unchecked(p: &HPolytope, x: &RationalVector, y: &RationalVector) -> bool {
    if x == y {
        return false;
    }
    let d = y.sub(x);
    matches!(p.max_step_unchecked(x, &d), Ok(Some(a)) if a == Rational::one())
        && matches!(is_circuit(p, &d), Ok(CircuitVerdict::Circuit { .. }))
}

/// Lands exactly at `y` in one step along a direction of `circuits`.
fn reaches_in_one(
    p: &HPolytope,
    z: &RationalVector,
    y: &RationalVector,
    circuits: &CircuitSet,
) -> bool {
    let d = y.sub(z);
    circuits.contains_direction(&d)
        && matches!(p.max_step_unchecked(z, &d), Ok(Some(a)) if a == Rational::one())
}

fn successors(p: &HPolytope, z: &RationalVector, circuits: &CircuitSet) -> Vec<RationalVector> {
    let mut out = Vec::new();
    for c in circuits.iter() {
        for dir in [c.direction.clone(), c.direction.neg()] {
            if let Ok(Some(a)) = p.max_step_unchecked(z, &dir) {
                out.push(z.add_scaled(&a, &dir));
            }
        }
    }
    out
}

/// Breadth-first circuit distances from `x` to each target, up to `depth_limit`.
pub fn distances_from(
    p: &HPolytope,
    x: &RationalVector,
    targets: &[RationalVector],
    circuits: &CircuitSet,
    depth_limit: usize,
) -> Result<Vec<Option<usize>>> {
    if !p.description_complete() {
        return Err(Error::IncompleteDescription);
    }
    for y in std::iter::once(x).chain(targets) {
        if !p.contains(y)? {
            return Err(Error::NotInPolytope);
        }
    }
    let mut dist: Vec<Option<usize>> = targets.iter().map(|y| (y == x).then_some(0)).collect();
    let mut frontier = vec![x.clone()];
    let mut visited: HashSet<RationalVector> = HashSet::from([x.clone()]);
    for d in 1..=depth_limit {
        if dist.iter().all(Option::is_some) {
            break;
        }
        for (t, y) in targets.iter().enumerate() {
            if dist[t].is_none() && frontier.iter().any(|z| reaches_in_one(p, z, y, circuits)) {
                dist[t] = Some(d);
            }
        }
        if d == depth_limit {
            break;
        }
        let mut next = Vec::new();
        for z in &frontier {
            for s in successors(p, z, circuits) {
                if visited.insert(s.clone()) {
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    Ok(dist)
}

/// Length of a shortest circuit walk from `x` to `y`, if within `depth_limit`.
pub fn circuit_distance(
    p: &HPolytope,
    x: &RationalVector,
    y: &RationalVector,
    circuits: &CircuitSet,
    depth_limit: usize,
) -> Result<Option<usize>> {
    Ok(distances_from(p, x, std::slice::from_ref(y), circuits, depth_limit)?[0])
}

/// All ordered-pair distances over `vertices`; row `i` holds distances from vertex `i`.
pub fn distance_matrix(
    p: &HPolytope,
    vertices: &[RationalVector],
    circuits: &CircuitSet,
    depth_limit: usize,
) -> Result<Vec<Vec<Option<usize>>>> {
    vertices
        .par_iter()
        .map(|x| distances_from(p, x, vertices, circuits, depth_limit))
        .collect()
}

/// Maximum circuit distance over ordered pairs of `vertices`.
pub fn circuit_diameter(
    p: &HPolytope,
    vertices: &[RationalVector],
    circuits: &CircuitSet,
    depth_limit: usize,
) -> Result<usize> {
    let m = distance_matrix(p, vertices, circuits, depth_limit)?;
    let mut best = 0;
    for row in m {
        for d in row {
            best = best.max(d.ok_or(Error::DepthLimit { limit: depth_limit })?);
        }
    }
    Ok(best)
}

/// `table[i][j]` is `one_step(points[i], points[j])`.
pub fn one_step_table(p: &HPolytope, points: &[RationalVector]) -> Result<Vec<Vec<bool>>> {
    for x in points {
        if !p.contains(x)? {
            return Err(Error::NotInPolytope);
        }
    }
    Ok(points
        .par_iter()
        .map(|x| points.iter().map(|y| one_step_unchecked(p, x, y)).collect())
        .collect())
}

/// A two-step walk `x -> z -> y` through one of `intermediates`.
pub fn two_step_search(
    p: &HPolytope,
    x: &RationalVector,
    y: &RationalVector,
    intermediates: &[RationalVector],
) -> Result<Option<Walk>> {
    for z in intermediates {
        if one_step(p, x, z)? && one_step(p, z, y)? {
            let w = Walk::from_points(vec![x.clone(), z.clone(), y.clone()]);
            if validate_walk(p, &w)?.valid {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Points reachable from `x` in one step along a direction with sign
/// pattern contained in the non-negative orthant, when every such circuit
/// can be listed by support.
///
/// Requires no equality rows, every inequality row to have coefficients of
/// a single sign, and every coordinate to be blocked from decreasing at `x`
/// by a tight row. Then only non-negative directions move, a non-negative
/// circuit is determined by its support, and `χ(S)` is tested for every
/// support `S`. Returns `None` when the preconditions fail or `n > 20`.
pub fn orthant_first_steps(
    p: &HPolytope,
    x: &RationalVector,
) -> Result<Option<Vec<RationalVector>>> {
    let n = p.ambient_dim();
    if !p.equalities().is_empty() || n > 20 || !p.contains(x)? {
        return Ok(None);
    }
    let single_sign = p.inequalities().iter().all(|c| {
        c.coeffs.iter().all(|a| !a.is_negative()) || c.coeffs.iter().all(|a| !a.is_positive())
    });
    if !single_sign {
        return Ok(None);
    }
    let tight = p.tight_rows_unchecked(x);
    let mut blocked = vec![false; n];
    for &i in &tight.inequality_rows {
        let c = &p.inequalities()[i].coeffs;
        if c.iter().all(|a| !a.is_positive()) {
            for (j, a) in c.iter().enumerate() {
                if a.is_negative() {
                    blocked[j] = true;
                }
            }
        }
    }
    if !blocked.iter().all(|&b| b) {
        return Ok(None);
    }
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let chi: RationalVector = (0..n)
            .map(|j| Rational::from_int(((mask >> j) & 1) as i64))
            .collect();
        if is_circuit(p, &chi)?.is_circuit() {
            if let Some(a) = p.max_step_unchecked(x, &chi)? {
                out.push(x.add_scaled(&a, &chi));
            }
        }
    }
    Ok(Some(out))
}

/// Bounds on the circuit distance from `x` to `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceBounds {
    pub lower: usize,
    pub upper: Option<usize>,
    /// A validated walk realizing `upper`.
    pub witness: Option<Walk>,
}

impl DistanceBounds {
    pub fn exact(&self) -> Option<usize> {
        (Some(self.lower) == self.upper).then_some(self.lower)
    }
}

/// Distance bounds without a full circuit set.
///
/// The lower bound is 1 or 2 from the one-step test, raised to 3 when
/// [`orthant_first_steps`] applies at `x` and no landing point is one step
/// from `y`. The upper bound is the shortest walk through `vertices` whose
/// consecutive points are one step apart.
pub fn distance_bounds(
    p: &HPolytope,
    x: &RationalVector,
    y: &RationalVector,
    vertices: &[RationalVector],
) -> Result<DistanceBounds> {
    if !p.contains(x)? || !p.contains(y)? {
        return Err(Error::NotInPolytope);
    }
    if x == y {
        return Ok(DistanceBounds {
            lower: 0,
            upper: Some(0),
            witness: Some(Walk::trivial(x.clone())),
        });
    }
    if one_step_unchecked(p, x, y) {
        let w = Walk::from_points(vec![x.clone(), y.clone()]);
        return Ok(DistanceBounds {
            lower: 1,
            upper: Some(1),
            witness: Some(w),
        });
    }
    let mut lower = 2;
    if let Some(landings) = orthant_first_steps(p, x)? {
        if !landings
            .iter()
            .any(|z| z == y || one_step_unchecked(p, z, y))
        {
            lower = 3;
        }
    }
    let mut pts: Vec<RationalVector> = vec![x.clone()];
    let mut index: HashMap<RationalVector, usize> = HashMap::from([(x.clone(), 0)]);
    for v in vertices.iter().chain(std::iter::once(y)) {
        if !index.contains_key(v) {
            index.insert(v.clone(), pts.len());
            pts.push(v.clone());
        }
    }
    let goal = index[y];
    let mut parent: Vec<Option<usize>> = vec![None; pts.len()];
    let mut seen = vec![false; pts.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        if u == goal {
            break;
        }
        for v in 0..pts.len() {
            if !seen[v] && one_step_unchecked(p, &pts[u], &pts[v]) {
                seen[v] = true;
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    let witness = seen[goal].then(|| {
        let mut path = vec![goal];
        while let Some(u) = parent[*path.last().unwrap()] {
            path.push(u);
        }
        Walk::from_points(path.into_iter().rev().map(|i| pts[i].clone()).collect())
    });
    if let Some(w) = &witness {
        if !validate_walk(p, w)?.valid {
            return Err(Error::InvariantViolated {
                stage: "distance bounds".into(),
                detail: "witness walk invalid".into(),
            });
        }
    }
    Ok(DistanceBounds {
        lower,
        upper: witness.as_ref().map(Walk::len),
        witness,
    })
}
