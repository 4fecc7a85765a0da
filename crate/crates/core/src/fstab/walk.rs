//! Two-phase circuit walk between half-integral points of the fractional
//! stable set polytope, of length at most `4 ε(v) + C_WALK` for a root `v`.
//!
//! Phase I moves from the start point outward, layer pair by layer pair,
//! to the point `y'` that satisfies the layered pattern (⋆) everywhere.
//! Phase II moves inward from `y'`, fixing the target's coordinates from the
//! outermost layer down to the root. Since `y'` depends only on the graph
//! and the root, both halves are memoized separately.
//!
//! Points are handled in doubled coordinates (`0, 1, 2` for `0, 1/2, 1`).
//! Each stage names a waypoint; consecutive waypoints are joined by a
//! direct circuit step when the difference is a circuit with maximal step
//! one, and otherwise by a shortest walk inside a small family of points
//! that are constant on classes of nodes sharing a layer and both endpoint
//! values.

use std::collections::{HashMap, VecDeque};

use super::graph::{ball_decomposition, BallDecomposition, Graph};
use super::{build_fstab_polytope, from_doubled, is_fstab_circuit_int, to_doubled};
use crate::error::{Error, Result};
use crate::linalg::RationalVector;
use crate::polytope::HPolytope;
use crate::walk::{validate_walk, Walk};

/// Additive constant in the length bound `4 ε(v) + C_WALK`.
pub const C_WALK: usize = 16;

const MAX_CLASSES: usize = 8;

type Point = Vec<u8>;

/// Length accounting for one constructed walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkStats {
    pub length: usize,
    pub eccentricity: usize,
    pub bound: usize,
    /// `length - 4 ε(v)`; may be negative.
    pub overhead: i64,
}

/// Walk builder for one graph and root, caching both phases.
pub struct FstabWalker<'g> {
    g: &'g Graph,
    p: HPolytope,
    balls: BallDecomposition,
    phase1: HashMap<Point, Vec<Point>>,
    phase2: HashMap<Point, Vec<Point>>,
    /// Stages that needed a family search instead of a direct step.
    pub searched_stages: usize,
    /// Stages whose walk exceeded the per-stage step allowance.
    pub overrun_stages: usize,
}

impl<'g> FstabWalker<'g> {
    pub fn new(g: &'g Graph, root: usize) -> Result<Self> {
        let p = build_fstab_polytope(g)?;
        let balls = ball_decomposition(g, root)?;
        Ok(FstabWalker {
            g,
            p,
            balls,
            phase1: HashMap::new(),
            phase2: HashMap::new(),
            searched_stages: 0,
            overrun_stages: 0,
        })
    }

    pub fn polytope(&self) -> &HPolytope {
        &self.p
    }

    pub fn balls(&self) -> &BallDecomposition {
        &self.balls
    }

    pub fn bound(&self) -> usize {
        4 * self.balls.eccentricity + C_WALK
    }

    fn b_parity(&self) -> usize {
        self.balls.odd_ball_radius.map_or(1, |b| b % 2)
    }

    fn below_b(&self, k: usize) -> bool {
        self.balls.odd_ball_radius.is_none_or(|b| k < b)
    }

    fn same_parity_as_b(&self, k: usize) -> bool {
        k % 2 == self.b_parity()
    }

    /// The pattern (⋆) at layer `k`.
    fn star(&self, k: usize) -> u8 {
        if !self.same_parity_as_b(k) {
            0
        } else if self.below_b(k) {
            2
        } else {
            1
        }
    }

    /// Half everywhere except `0` on layers `k >= b` of the parity of `b`.
    fn shifted(&self, k: usize) -> u8 {
        if self.same_parity_as_b(k) && !self.below_b(k) {
            0
        } else {
            1
        }
    }

    fn layer(&self, u: usize) -> usize {
        self.balls.layer_of[u]
    }

    fn n(&self) -> usize {
        self.g.node_count()
    }

    fn feasible(&self, z: &[u8]) -> bool {
        self.g.edges().iter().all(|&(u, v)| z[u] + z[v] <= 2)
    }

    /// Feasible, and integral when the graph is bipartite.
    fn admissible(&self, z: &[u8]) -> bool {
        self.feasible(z) && (self.balls.odd_ball_radius.is_some() || z.iter().all(|&d| d != 1))
    }

    /// Target with `spec` on the layers `0..=upto` and every other node
    /// lowered just enough to stay feasible next to the specified ones.
    fn lowered(&self, cur: &[u8], upto: usize, spec: impl Fn(usize, usize) -> u8) -> Point {
        let mut w = cur.to_vec();
        for (u, wu) in w.iter_mut().enumerate() {
            if self.layer(u) <= upto {
                *wu = spec(u, self.layer(u));
            }
        }
        for u in 0..self.n() {
            if self.layer(u) > upto {
                let cap = self
                    .g
                    .neighbors(u)
                    .iter()
                    .filter(|&&x| self.layer(x) <= upto)
                    .map(|&x| 2 - w[x])
                    .min()
                    .unwrap_or(2);
                w[u] = w[u].min(cap);
            }
        }
        w
    }

    fn star_ball(&self, cur: &[u8], upto: usize) -> Point {
        self.lowered(cur, upto, |_, k| self.star(k))
    }

    /// Phase II pattern: (⋆) below layer `t`, (⋆⋆⋆) on layer `t`, target beyond.
    fn phase2_pattern(&self, t: usize, x: &[u8]) -> Point {
        let phi = if self.below_b(t) { 2 } else { 1 };
        (0..self.n())
            .map(|u| {
                let k = self.layer(u);
                if k < t {
                    self.star(k)
                } else if k > t {
                    x[u]
                } else {
                    let m = self
                        .g
                        .neighbors(u)
                        .iter()
                        .filter(|&&w| self.layer(w) == t + 1)
                        .map(|&w| x[w])
                        .max();
                    match m {
                        Some(2) => 0,
                        Some(1) => 1,
                        _ => phi,
                    }
                }
            })
            .collect()
    }

    /// One circuit step from `z` lands exactly at `q` (both feasible).
    fn one_step(&self, z: &[u8], q: &[u8]) -> bool {
        let d: Vec<i8> = z.iter().zip(q).map(|(&a, &b)| b as i8 - a as i8).collect();
        if !is_fstab_circuit_int(self.g, &d) {
            return false;
        }
        let edge_blocks = self
            .g
            .edges()
            .iter()
            .any(|&(u, v)| d[u] + d[v] > 0 && q[u] + q[v] == 2);
        edge_blocks || (0..self.n()).any(|u| d[u] < 0 && q[u] == 0)
    }

    /// Feasible points that agree with `cur` outside the nodes within `hops`
    /// of a changed node (all nodes if `None`) and are constant on classes,
    /// or free per node when `per_node` is set.
    fn family(
        &self,
        cur: &[u8],
        target: &[u8],
        hops: Option<usize>,
        per_node: bool,
    ) -> Option<Vec<Point>> {
        let n = self.n();
        let mut vary: Vec<bool> = (0..n)
            .map(|u| hops.is_none() || cur[u] != target[u])
            .collect();
        for _ in 0..hops.unwrap_or(0) {
            let prev = vary.clone();
            for u in (0..n).filter(|&u| prev[u]) {
                for &w in self.g.neighbors(u) {
                    vary[w] = true;
                }
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        if per_node {
            classes = (0..n).filter(|&u| vary[u]).map(|u| vec![u]).collect();
        } else {
            for by_type in [false, true] {
                let mut keys: HashMap<(usize, bool, u8, u8), usize> = HashMap::new();
                classes.clear();
                for u in (0..n).filter(|&u| vary[u]) {
                    let k = self.layer(u);
                    let lk = if by_type {
                        (k % 2, self.below_b(k))
                    } else {
                        (k, false)
                    };
                    let key = (lk.0, lk.1, cur[u], target[u]);
                    let id = *keys.entry(key).or_insert_with(|| {
                        classes.push(Vec::new());
                        classes.len() - 1
                    });
                    classes[id].push(u);
                }
                if classes.len() <= MAX_CLASSES {
                    break;
                }
            }
        }
        if classes.len() > MAX_CLASSES {
            return None;
        }
        let mut out = Vec::new();
        let total = 3usize.pow(classes.len() as u32);
        for code in 0..total {
            let mut z = cur.to_vec();
            let mut c = code;
            for cl in &classes {
                let val = (c % 3) as u8;
                c /= 3;
                for &u in cl {
                    z[u] = val;
                }
            }
            // the endpoints may be fractional on a bipartite graph
            if self.admissible(&z) || z == cur || z == target {
                out.push(z);
            }
        }
        Some(out)
    }

    fn search(
        &self,
        cur: &[u8],
        target: &[u8],
        hops: Option<usize>,
        per_node: bool,
    ) -> Option<Vec<Point>> {
        let fam = self.family(cur, target, hops, per_node)?;
        let index: HashMap<&Point, usize> = fam.iter().enumerate().map(|(i, z)| (z, i)).collect();
        let s = *index.get(&cur.to_vec())?;
        let goal = *index.get(&target.to_vec())?;
        let mut parent = vec![usize::MAX; fam.len()];
        parent[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            if u == goal {
                break;
            }
            for v in 0..fam.len() {
                if parent[v] == usize::MAX && self.one_step(&fam[u], &fam[v]) {
                    parent[v] = u;
                    q.push_back(v);
                }
            }
        }
        if parent[goal] == usize::MAX {
            return None;
        }
        let mut path = vec![goal];
        while *path.last().unwrap() != s {
            path.push(parent[*path.last().unwrap()]);
        }
        path.pop();
        Some(path.into_iter().rev().map(|i| fam[i].clone()).collect())
    }

    /// Appends a circuit walk from the last point of `path` to `target`.
    fn connect(
        &mut self,
        path: &mut Vec<Point>,
        target: Point,
        allowance: usize,
        stage: &str,
    ) -> Result<()> {
        let cur = path.last().expect("non-empty path").clone();
        if cur == target {
            return Ok(());
        }
        if !self.feasible(&target) {
            return Err(Error::InvariantViolated {
                stage: stage.into(),
                detail: "waypoint is infeasible".into(),
            });
        }
        if self.one_step(&cur, &target) {
            path.push(target);
            return Ok(());
        }
        self.searched_stages += 1;
        let found = [
            (Some(1), false),
            (Some(2), false),
            (Some(1), true),
            (Some(2), true),
            (None, true),
        ]
        .into_iter()
        .find_map(|(hops, per_node)| self.search(&cur, &target, hops, per_node));
        let Some(steps) = found else {
            return Err(Error::ConstructionFailed(format!(
                "{stage}: no walk to the waypoint within the search family"
            )));
        };
        if steps.len() > allowance {
            self.overrun_stages += 1;
        }
        path.extend(steps);
        Ok(())
    }

    /// Waypoint feasible, or merged into the next stage's allowance.
    fn connect_optional(
        &mut self,
        path: &mut Vec<Point>,
        target: Point,
        allowance: usize,
        stage: &str,
    ) -> Result<usize> {
        if self.admissible(&target) {
            self.connect(path, target, allowance, stage)?;
            Ok(0)
        } else {
            Ok(allowance)
        }
    }

    fn check(&self, ok: bool, stage: &str, detail: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::InvariantViolated {
                stage: stage.into(),
                detail: detail.into(),
            })
        }
    }

    fn agrees_with_star(&self, z: &[u8], upto: usize) -> bool {
        (0..self.n()).all(|u| self.layer(u) > upto || z[u] == self.star(self.layer(u)))
    }

    fn run_phase1(&mut self, x: &[u8]) -> Result<Vec<Point>> {
        let eps = self.balls.eccentricity;
        let b = self.balls.odd_ball_radius;
        let mut path = vec![x.to_vec()];
        let t0 = if self.b_parity() == 1 { 1 } else { 2 };
        let start = self.star_ball(x, t0);
        self.connect(
            &mut path,
            start,
            if t0 == 1 { 4 } else { 6 },
            "phase I start",
        )?;
        let mut t = t0.min(eps);
        self.check(
            self.agrees_with_star(path.last().unwrap(), t),
            "phase I start",
            "(⋆) fails on B(v,t)",
        )?;
        while t < eps {
            let cur = path.last().unwrap().clone();
            let alt = |k: usize| if self.same_parity_as_b(k) { 0 } else { 2 };
            if b.is_none_or(|b| t + 2 < b) {
                let z1 = self.lowered(&cur, t + 1, |_, k| alt(k));
                self.connect(&mut path, z1, 2, "phase I step (t < b - 2)")?;
                let z2 = self.star_ball(path.last().unwrap(), t + 2);
                self.connect(&mut path, z2, 1, "phase I step (t < b - 2)")?;
            } else if b == Some(t + 2) {
                let z1 = self.lowered(&cur, t + 1, |_, k| alt(k));
                self.connect(&mut path, z1, 2, "phase I step (t = b - 2)")?;
                let z2 = self.lowered(path.last().unwrap(), t + 2, |_, _| 1);
                self.connect(&mut path, z2, 1, "phase I step (t = b - 2)")?;
                let z3 = self.star_ball(path.last().unwrap(), t + 2);
                self.connect(&mut path, z3, 1, "phase I step (t = b - 2)")?;
            } else {
                let z1 = self.lowered(&cur, t + 1, |_, k| self.shifted(k));
                self.connect(&mut path, z1, 1, "phase I step (t >= b)")?;
                let z2 = self.star_ball(path.last().unwrap(), t + 2);
                self.connect(&mut path, z2, 1, "phase I step (t >= b)")?;
            }
            t = (t + 2).min(eps);
            self.check(
                self.agrees_with_star(path.last().unwrap(), t),
                "phase I step",
                "(⋆) fails on B(v,t)",
            )?;
        }
        self.check(
            self.agrees_with_star(path.last().unwrap(), eps),
            "phase I end",
            "(⋆) fails on V",
        )?;
        Ok(path)
    }

    fn y_prime(&self) -> Point {
        (0..self.n()).map(|u| self.star(self.layer(u))).collect()
    }

    fn run_phase2(&mut self, x: &[u8]) -> Result<Vec<Point>> {
        let eps = self.balls.eccentricity;
        let b = self.balls.odd_ball_radius;
        let mut path = vec![self.y_prime()];
        let mut t = eps;
        if !self.same_parity_as_b(eps) {
            let z1: Point = (0..self.n())
                .map(|u| {
                    let k = self.layer(u);
                    if k < t {
                        self.star(k)
                    } else if x[u] >= 1 {
                        1
                    } else {
                        0
                    }
                })
                .collect();
            let extra = self.connect_optional(&mut path, z1, 2, "phase II start")?;
            let w = self.phase2_pattern(t - 1, x);
            self.connect(&mut path, w, 2 + extra, "phase II start")?;
            t -= 1;
        }
        self.check(
            *path.last().unwrap() == self.phase2_pattern(t, x),
            "phase II start",
            "(⋆⋆)/(⋆⋆⋆) fail",
        )?;
        while t >= 2 {
            if b.is_some_and(|b| t >= b + 2) {
                let half_or_zero = |u: usize| if x[u] >= 1 { 1 } else { 0 };
                let z1: Point = (0..self.n())
                    .map(|u| match self.layer(u) {
                        k if k < t => self.shifted(k),
                        k if k == t => half_or_zero(u),
                        _ => x[u],
                    })
                    .collect();
                let mut extra =
                    self.connect_optional(&mut path, z1, 1, "phase II step (t >= b + 2)")?;
                let z2: Point = (0..self.n())
                    .map(|u| match self.layer(u) {
                        k if k + 1 < t => self.star(k),
                        k if k + 1 == t => half_or_zero(u),
                        _ => x[u],
                    })
                    .collect();
                extra =
                    self.connect_optional(&mut path, z2, 1 + extra, "phase II step (t >= b + 2)")?;
                let z3: Point = (0..self.n())
                    .map(|u| match self.layer(u) {
                        k if k + 1 < t => self.shifted(k),
                        _ => x[u],
                    })
                    .collect();
                extra =
                    self.connect_optional(&mut path, z3, 1 + extra, "phase II step (t >= b + 2)")?;
                let w = self.phase2_pattern(t - 2, x);
                self.connect(&mut path, w, 1 + extra, "phase II step (t >= b + 2)")?;
            } else {
                let w = self.phase2_pattern(t - 2, x);
                self.connect(&mut path, w, 4, "phase II step (t < b + 2)")?;
            }
            t -= 2;
            self.check(
                *path.last().unwrap() == self.phase2_pattern(t, x),
                "phase II step",
                "(⋆⋆)/(⋆⋆⋆) fail",
            )?;
        }
        self.connect(
            &mut path,
            x.to_vec(),
            if t == 1 { 3 } else { 1 },
            "phase II finish",
        )?;
        Ok(path)
    }

    fn half_integral(&self, x: &RationalVector) -> Result<Point> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: x.len(),
            });
        }
        let z = to_doubled(x)
            .ok_or_else(|| Error::InvalidArgument("point is not half-integral".into()))?;
        if !self.feasible(&z) {
            return Err(Error::NotInPolytope);
        }
        Ok(z)
    }

    /// Constructed walk from `x_start` to `x_end` with its length accounting.
    /// Both points must be half-integral and feasible.
    pub fn walk(
        &mut self,
        x_start: &RationalVector,
        x_end: &RationalVector,
    ) -> Result<(Walk, WalkStats)> {
        let a = self.half_integral(x_start)?;
        let z = self.half_integral(x_end)?;
        let points: Vec<Point> = if a == z {
            vec![a]
        } else {
            if !self.phase1.contains_key(&a) {
                let p1 = self.run_phase1(&a)?;
                self.phase1.insert(a.clone(), p1);
            }
            if !self.phase2.contains_key(&z) {
                let p2 = self.run_phase2(&z)?;
                self.phase2.insert(z.clone(), p2);
            }
            let mut pts = self.phase1[&a].clone();
            pts.extend(self.phase2[&z].iter().skip(1).cloned());
            shortcut(pts)
        };
        let walk = Walk::from_points(points.iter().map(|z| from_doubled(z)).collect());
        let eps = self.balls.eccentricity;
        let stats = WalkStats {
            length: walk.len(),
            eccentricity: eps,
            bound: self.bound(),
            overhead: walk.len() as i64 - 4 * eps as i64,
        };
        if walk.len() > stats.bound {
            return Err(Error::InvariantViolated {
                stage: "length bound".into(),
                detail: format!(
                    "walk of length {} exceeds 4 ε(v) + {C_WALK} = {}",
                    walk.len(),
                    stats.bound
                ),
            });
        }
        Ok((walk, stats))
    }
}

/// Cuts the loop when the walk revisits a point.
fn shortcut(points: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        if let Some(i) = out.iter().position(|q| *q == p) {
            out.truncate(i);
        }
        out.push(p);
    }
    out
}

/// Validated two-phase walk from `x_start` to `x_end` rooted at `v`.
pub fn fstab_walk(
    g: &Graph,
    x_start: &RationalVector,
    x_end: &RationalVector,
    v: usize,
) -> Result<(Walk, WalkStats)> {
    let mut walker = FstabWalker::new(g, v)?;
    let (walk, stats) = walker.walk(x_start, x_end)?;
    let check = validate_walk(walker.polytope(), &walk)?;
    if !check.valid {
        let (i, why) = check.violation.unwrap_or_default();
        return Err(Error::InvariantViolated {
            stage: "validation".into(),
            detail: format!("step {i}: {why}"),
        });
    }
    if walk.end() != x_end {
        return Err(Error::InvariantViolated {
            stage: "validation".into(),
            detail: "walk does not end at the target".into(),
        });
    }
    Ok((walk, stats))
}
