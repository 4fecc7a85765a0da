//! Named verification suites with literal expected values.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{enumerate_circuits, is_circuit, CircuitVerdict, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::families::{
    build_matching_polytope, build_perfect_matching_polytope, build_tsp_polytope,
    enumerate_matchings, enumerate_perfect_matchings, enumerate_tours, matching_component_walk,
    matching_two_step_recipe, tour_edges, EdgeIndex, EdgeSet,
};
use crate::fstab::{
    build_fstab_polytope, connected_graphs_up_to_iso, enumerate_fstab_vertices, graph_center,
    is_fstab_circuit, random_connected_graph, FstabWalker, Graph, C_WALK,
};
use crate::linalg::{Rational, RationalVector};
use crate::polytope::{Constraint, HPolytope};
use crate::walk::{
    circuit_step, distance_bounds, distance_matrix, one_step, one_step_table, orthant_first_steps,
    validate_walk, Walk,
};

pub const SUITES: &[&str] = &[
    "matching-small",
    "matching-6",
    "matching-7",
    "permatch",
    "tsp-5",
    "tsp-6",
    "tsp-7",
    "fstab-oracle",
    "fstab-walks",
    "nonneg-circuits",
    "walk-invariants",
];

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Test this many random pairs instead of all pairs in the long checks.
    pub sample: Option<usize>,
    pub seed: u64,
    pub budget: u64,
    pub depth_limit: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            sample: None,
            seed: 0,
            budget: DEFAULT_BUDGET,
            depth_limit: 6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub description: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    pub runtime_ms: u64,
    pub sampled: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl VerificationReport {
    fn new(suite: &str) -> Self {
        VerificationReport {
            suite: suite.into(),
            checks: Vec::new(),
            pass: true,
        }
    }

    /// Runs one check; an error fails the check without aborting the suite.
    fn check(
        &mut self,
        description: &str,
        expected: &str,
        sampled: bool,
        f: impl FnOnce() -> Result<(String, bool)>,
    ) {
        let start = Instant::now();
        let (observed, pass) = match f() {
            Ok(r) => r,
            Err(e) => (format!("error: {e}"), false),
        };
        self.pass &= pass;
        self.checks.push(CheckRecord {
            description: description.into(),
            expected: expected.into(),
            observed,
            pass,
            runtime_ms: start.elapsed().as_millis() as u64,
            sampled,
        });
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            let sampled = if c.sampled { " [sampled]" } else { "" };
            let _ = writeln!(
                s,
                "[{tag}] {}{sampled}: expected {}, observed {} ({} ms)",
                c.description, c.expected, c.observed, c.runtime_ms
            );
        }
        let _ = writeln!(
            s,
            "suite {}: {}",
            self.suite,
            if self.pass { "PASS" } else { "FAIL" }
        );
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(name);
    match name {
        "matching-small" => matching_small(&mut r, opts),
        "matching-6" => matching_6(&mut r),
        "matching-7" => matching_7(&mut r),
        "permatch" => permatch(&mut r, opts),
        "tsp-5" => tsp_5(&mut r, opts),
        "tsp-6" => tsp_6(&mut r),
        "tsp-7" => tsp_7(&mut r, opts),
        "fstab-oracle" => fstab_oracle(&mut r, opts),
        "fstab-walks" => fstab_walks(&mut r, opts),
        "nonneg-circuits" => nonneg_circuits(&mut r, opts),
        "walk-invariants" => walk_invariants(&mut r, opts),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown suite '{name}'; known: {}",
                SUITES.join(", ")
            )))
        }
    }
    Ok(r)
}

fn chis(ix: &EdgeIndex, sets: &[EdgeSet]) -> Vec<RationalVector> {
    sets.iter().map(|m| ix.chi(m)).collect()
}

fn diameter_by_bfs(
    p: &HPolytope,
    verts: &[RationalVector],
    opts: &VerifyOptions,
) -> Result<Vec<Vec<usize>>> {
    let circuits = enumerate_circuits(p, opts.budget)?;
    let m = distance_matrix(p, verts, &circuits, opts.depth_limit)?;
    m.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|d| {
                    d.ok_or(Error::DepthLimit {
                        limit: opts.depth_limit,
                    })
                })
                .collect()
        })
        .collect()
}

fn max_entry(m: &[Vec<usize>]) -> usize {
    m.iter().flatten().copied().max().unwrap_or(0)
}

/// All unordered index pairs, or `k` distinct random ones.
fn pairs(count: usize, sample: Option<usize>, seed: u64) -> Vec<(usize, usize)> {
    let total = count * count.saturating_sub(1) / 2;
    match sample {
        Some(k) if k < total => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut seen = HashSet::new();
            while seen.len() < k {
                let i = rng.gen_range(0..count);
                let j = rng.gen_range(0..count);
                if i != j {
                    seen.insert((i.min(j), i.max(j)));
                }
            }
            let mut v: Vec<_> = seen.into_iter().collect();
            v.sort_unstable();
            v
        }
        _ => (0..count)
            .flat_map(|i| (i + 1..count).map(move |j| (i, j)))
            .collect(),
    }
}

fn matching_small(r: &mut VerificationReport, opts: &VerifyOptions) {
    for (n, expected) in [(2, 1), (3, 1), (4, 2), (5, 2)] {
        r.check(
            &format!("circuit diameter of the matching polytope, n = {n}"),
            &expected.to_string(),
            false,
            || {
                let p = build_matching_polytope(n)?;
                let verts = chis(&EdgeIndex::new(n), &enumerate_matchings(n)?);
                let d = max_entry(&diameter_by_bfs(&p, &verts, opts)?);
                Ok((d.to_string(), d == expected))
            },
        );
    }
}

fn matching_6(r: &mut VerificationReport) {
    let n = 6;
    let ix = EdgeIndex::new(n);
    let perfect: EdgeSet = vec![(0, 1), (2, 3), (4, 5)];
    let Ok(p) = build_matching_polytope(n) else {
        r.check("build the matching polytope, n = 6", "ok", false, || {
            Ok(("error".into(), false))
        });
        return;
    };
    r.check(
        "first steps from the empty matching, n = 6",
        "15 single-edge matchings",
        false,
        || {
            let zero = ix.chi(&[]);
            let landings = orthant_first_steps(&p, &zero)?
                .ok_or_else(|| Error::InvalidArgument("not applicable".into()))?;
            let singles = landings
                .iter()
                .filter(|z| z.support().len() == 1 && z.iter().all(|a| a.is_integer()))
                .count();
            let distinct: HashSet<_> = landings.iter().collect();
            let ok = singles == landings.len() && distinct.len() == 15;
            Ok((
                format!("{} landings, {} single-edge", distinct.len(), singles),
                ok,
            ))
        },
    );
    r.check(
        "single-edge matchings one circuit step from {01,23,45}",
        "0 of 15",
        false,
        || {
            let y = ix.chi(&perfect);
            let mut hits = 0;
            for k in 0..ix.len() {
                let e = ix.pair(k);
                if is_circuit(&p, &y.sub(&ix.chi(&[e])))?.is_circuit() {
                    hits += 1;
                }
            }
            Ok((format!("{hits} of {}", ix.len()), hits == 0))
        },
    );
    r.check(
        "circuit distance from the empty matching to {01,23,45}",
        "3",
        false,
        || {
            let verts = chis(&ix, &enumerate_matchings(n)?);
            let b = distance_bounds(&p, &ix.chi(&[]), &ix.chi(&perfect), &verts)?;
            let obs = match b.exact() {
                Some(d) => d.to_string(),
                None => format!("between {} and {:?}", b.lower, b.upper),
            };
            Ok((obs, b.exact() == Some(3)))
        },
    );
    r.check(
        "longest component walk over all ordered matching pairs, n = 6",
        "3",
        false,
        || {
            let ms = enumerate_matchings(n)?;
            let mut worst = 0;
            for a in &ms {
                for b in &ms {
                    let w = matching_component_walk(&p, a, b, n)?;
                    if !validate_walk(&p, &w)?.valid || w.end() != &ix.chi(b) {
                        return Ok((format!("invalid walk {a:?} -> {b:?}"), false));
                    }
                    worst = worst.max(w.len());
                }
            }
            Ok((worst.to_string(), worst == 3))
        },
    );
}

fn matching_7(r: &mut VerificationReport) {
    let n = 7;
    let ix = EdgeIndex::new(n);
    r.check(
        "two-step recipe over all ordered matching pairs, n = 7",
        "232 * 231 walks of length <= 2",
        false,
        || {
            let p = build_matching_polytope(n)?;
            let ms = enumerate_matchings(n)?;
            let mut count = 0;
            let mut worst = 0;
            for a in &ms {
                for b in &ms {
                    if a == b {
                        continue;
                    }
                    let w = matching_two_step_recipe(&p, a, b, n)?;
                    if !validate_walk(&p, &w)?.valid || w.end() != &ix.chi(b) {
                        return Ok((format!("invalid walk {a:?} -> {b:?}"), false));
                    }
                    worst = worst.max(w.len());
                    count += 1;
                }
            }
            Ok((
                format!(
                    "{} * {} walks, longest {worst}",
                    ms.len(),
                    count / ms.len().max(1)
                ),
                count == 232 * 231 && worst <= 2,
            ))
        },
    );
    r.check(
        "a matching pair at distance 2 exists, n = 7",
        "difference is not a circuit",
        false,
        || {
            let p = build_matching_polytope(n)?;
            let ms = enumerate_matchings(n)?;
            for a in &ms {
                for b in &ms {
                    if a != b && !is_circuit(&p, &ix.chi(b).sub(&ix.chi(a)))?.is_circuit() {
                        return Ok((format!("{a:?} -> {b:?} is not a circuit"), true));
                    }
                }
            }
            Ok(("every difference is a circuit".into(), false))
        },
    );
}

fn all_pairs_one_step(
    p: &HPolytope,
    verts: &[RationalVector],
    idx: &[(usize, usize)],
) -> Result<usize> {
    let mut ok = 0;
    for &(i, j) in idx {
        if one_step(p, &verts[i], &verts[j])? && one_step(p, &verts[j], &verts[i])? {
            ok += 1;
        }
    }
    Ok(ok)
}

fn permatch(r: &mut VerificationReport, opts: &VerifyOptions) {
    for n in [4, 6] {
        r.check(
            &format!("perfect matching pairs one circuit step apart, n = {n}"),
            "all pairs",
            false,
            || {
                let p = build_perfect_matching_polytope(n)?;
                let verts = chis(&EdgeIndex::new(n), &enumerate_perfect_matchings(n)?);
                let idx = pairs(verts.len(), None, 0);
                let ok = all_pairs_one_step(&p, &verts, &idx)?;
                Ok((format!("{ok} of {} pairs", idx.len()), ok == idx.len()))
            },
        );
    }
    let ix8 = EdgeIndex::new(8);
    r.check(
        "{01,23,45,67} -> {03,12,47,56} difference, n = 8",
        "not a circuit",
        false,
        || {
            let p = build_perfect_matching_polytope(8)?;
            let m1 = ix8.chi(&[(0, 1), (2, 3), (4, 5), (6, 7)]);
            let m2 = ix8.chi(&[(0, 3), (1, 2), (4, 7), (5, 6)]);
            let v = is_circuit(&p, &m1.sub(&m2))?;
            Ok((
                if v.is_circuit() {
                    "circuit"
                } else {
                    "not a circuit"
                }
                .into(),
                !v.is_circuit(),
            ))
        },
    );
    r.check(
        "circuit diameter of the perfect matching polytope, n = 8",
        "2",
        false,
        || {
            let p = build_perfect_matching_polytope(8)?;
            let verts = chis(&ix8, &enumerate_perfect_matchings(8)?);
            let table = one_step_table(&p, &verts)?;
            let mut worst = 0;
            for i in 0..verts.len() {
                for j in 0..verts.len() {
                    if i == j || table[i][j] {
                        worst = worst.max(usize::from(i != j));
                        continue;
                    }
                    let Some(k) = (0..verts.len()).find(|&k| table[i][k] && table[k][j]) else {
                        return Ok((format!("no two-step walk for pair ({i}, {j})"), false));
                    };
                    let w = Walk::from_points(vec![
                        verts[i].clone(),
                        verts[k].clone(),
                        verts[j].clone(),
                    ]);
                    if !validate_walk(&p, &w)?.valid {
                        return Ok((format!("invalid two-step walk for pair ({i}, {j})"), false));
                    }
                    worst = 2;
                }
            }
            Ok((worst.to_string(), worst == 2))
        },
    );
    r.check(
        "perfect matching pairs one circuit step apart, n = 10",
        "all pairs",
        opts.sample.is_some(),
        || {
            let p = build_perfect_matching_polytope(10)?;
            let verts = chis(&EdgeIndex::new(10), &enumerate_perfect_matchings(10)?);
            let idx = pairs(verts.len(), opts.sample, opts.seed);
            let ok = all_pairs_one_step(&p, &verts, &idx)?;
            Ok((format!("{ok} of {} pairs", idx.len()), ok == idx.len()))
        },
    );
}

fn tours_as_vectors(n: usize) -> Result<(Vec<EdgeSet>, Vec<RationalVector>)> {
    let ix = EdgeIndex::new(n);
    let edges: Vec<EdgeSet> = enumerate_tours(n)?.iter().map(|t| tour_edges(t)).collect();
    let verts = chis(&ix, &edges);
    Ok((edges, verts))
}

fn disjoint(a: &EdgeSet, b: &EdgeSet) -> bool {
    a.iter().all(|e| !b.contains(e))
}

fn tsp_5(r: &mut VerificationReport, opts: &VerifyOptions) {
    let n = 5;
    let data = build_tsp_polytope(n, false).and_then(|p| {
        let (edges, verts) = tours_as_vectors(n)?;
        let m = diameter_by_bfs(&p, &verts, opts)?;
        Ok((edges, m))
    });
    let (edges, m) = match data {
        Ok(d) => d,
        Err(e) => {
            r.check(
                "circuit distances between tours, n = 5",
                "computed",
                false,
                || Err(e),
            );
            return;
        }
    };
    r.check(
        "circuit diameter of the TSP polytope, n = 5",
        "2",
        false,
        || {
            let d = max_entry(&m);
            Ok((d.to_string(), d == 2))
        },
    );
    r.check(
        "edge-disjoint tour pairs, n = 5",
        "distance 2",
        false,
        || {
            let mut found = Vec::new();
            for i in 0..edges.len() {
                for j in i + 1..edges.len() {
                    if disjoint(&edges[i], &edges[j]) {
                        found.push(m[i][j]);
                    }
                }
            }
            let ok = !found.is_empty() && found.iter().all(|&d| d == 2);
            Ok((
                format!(
                    "{} pairs, distances {:?}",
                    found.len(),
                    found.iter().collect::<HashSet<_>>()
                ),
                ok,
            ))
        },
    );
    r.check(
        "tour pairs sharing an edge, n = 5",
        "distance 1",
        false,
        || {
            let mut found = Vec::new();
            for i in 0..edges.len() {
                for j in i + 1..edges.len() {
                    if !disjoint(&edges[i], &edges[j]) {
                        found.push(m[i][j]);
                    }
                }
            }
            let ok = found.iter().all(|&d| d == 1);
            Ok((
                format!(
                    "{} pairs, distances {:?}",
                    found.len(),
                    found.iter().collect::<HashSet<_>>()
                ),
                ok,
            ))
        },
    );
}

fn tsp_6(r: &mut VerificationReport) {
    r.check(
        "tour pairs one circuit step apart with comb rows, n = 6",
        "1770 of 1770 pairs",
        false,
        || {
            let p = build_tsp_polytope(6, true)?;
            let (_, verts) = tours_as_vectors(6)?;
            let idx = pairs(verts.len(), None, 0);
            let ok = all_pairs_one_step(&p, &verts, &idx)?;
            Ok((format!("{ok} of {} pairs", idx.len()), ok == 1770))
        },
    );
}

fn tsp_7(r: &mut VerificationReport, opts: &VerifyOptions) {
    r.check(
        "tour differences certified as circuits with comb rows, n = 7",
        "all pairs",
        opts.sample.is_some(),
        || {
            let p = build_tsp_polytope(7, true)?;
            let (edges, verts) = tours_as_vectors(7)?;
            let idx = pairs(verts.len(), opts.sample, opts.seed);
            let (mut ok, mut disjoint_ok, mut disjoint_total) = (0, 0, 0);
            for &(i, j) in &idx {
                let c = matches!(
                    is_circuit(&p, &verts[j].sub(&verts[i]))?,
                    CircuitVerdict::Circuit { .. }
                );
                ok += usize::from(c);
                if disjoint(&edges[i], &edges[j]) {
                    disjoint_total += 1;
                    disjoint_ok += usize::from(c);
                }
            }
            let obs = format!(
                "{ok} of {} pairs ({disjoint_ok} of {disjoint_total} edge-disjoint)",
                idx.len()
            );
            let full = opts.sample.is_some() || idx.len() == 360 * 359 / 2;
            Ok((obs, ok == idx.len() && full))
        },
    );
}

/// Every vector in `{-1, -1/2, 0, 1/2, 1}^n` except zero.
fn half_grid(n: usize) -> Vec<RationalVector> {
    let total = 5usize.pow(n as u32);
    (0..total)
        .map(|code| {
            let mut c = code;
            (0..n)
                .map(|_| {
                    let d = (c % 5) as i64 - 2;
                    c /= 5;
                    Rational::new(d, 2)
                })
                .collect()
        })
        .filter(|v: &RationalVector| !v.is_zero())
        .collect()
}

fn random_rational_vector(n: usize, rng: &mut ChaCha8Rng) -> RationalVector {
    loop {
        let v: RationalVector = (0..n)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    Rational::zero()
                } else {
                    Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3))
                }
            })
            .collect();
        if !v.is_zero() {
            return v;
        }
    }
}

fn oracle_mismatches(g: &Graph, rng: &mut ChaCha8Rng, grid: bool) -> Result<(usize, usize)> {
    let n = g.node_count();
    let p = build_fstab_polytope(g)?;
    let mut cands = if grid { half_grid(n) } else { Vec::new() };
    cands.extend((0..100).map(|_| random_rational_vector(n, rng)));
    let mut bad = 0;
    for c in &cands {
        if is_fstab_circuit(g, c)? != is_circuit(&p, c)?.is_circuit() {
            bad += 1;
        }
    }
    Ok((bad, cands.len()))
}

fn fstab_oracle(r: &mut VerificationReport, opts: &VerifyOptions) {
    r.check(
        "graph test agrees with the rank test, connected graphs on 2-5 nodes",
        "0 mismatches",
        false,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let (mut bad, mut total, mut graphs) = (0, 0, 0);
            for n in 2..=5 {
                for g in connected_graphs_up_to_iso(n) {
                    let (b, t) = oracle_mismatches(&g, &mut rng, true)?;
                    bad += b;
                    total += t;
                    graphs += 1;
                }
            }
            Ok((
                format!("{bad} mismatches over {total} vectors on {graphs} graphs"),
                bad == 0,
            ))
        },
    );
    r.check(
        "graph test agrees with the rank test, 100 random graphs on 6-7 nodes",
        "0 mismatches",
        true,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(1));
            let (mut bad, mut total) = (0, 0);
            for _ in 0..100 {
                let n = rng.gen_range(6..=7);
                let density = rng.gen_range(0.1..0.6);
                let g = random_connected_graph(n, density, &mut rng);
                let (b, t) = oracle_mismatches(&g, &mut rng, true)?;
                bad += b;
                total += t;
            }
            Ok((format!("{bad} mismatches over {total} vectors"), bad == 0))
        },
    );
}

fn fstab_walks(r: &mut VerificationReport, opts: &VerifyOptions) {
    r.check(
        "constructed walks on connected graphs with at most 6 nodes, center root",
        &format!("valid, ending at the target, length <= 4 ecc + {C_WALK}"),
        false,
        || {
            let (mut walks, mut max_overhead, mut overruns) = (0usize, i64::MIN, 0usize);
            for n in 2..=6 {
                for g in connected_graphs_up_to_iso(n) {
                    let verts = enumerate_fstab_vertices(&g)?;
                    let mut walker = FstabWalker::new(&g, graph_center(&g)?)?;
                    for x in &verts {
                        for y in &verts {
                            let (w, s) = walker.walk(x, y)?;
                            let check = validate_walk(walker.polytope(), &w)?;
                            if !check.valid || w.end() != y || s.length > s.bound {
                                return Ok((format!("bad walk on {:?}: {:?}", g.edges(), check.violation), false));
                            }
                            walks += 1;
                            max_overhead = max_overhead.max(s.overhead);
                        }
                    }
                    overruns += walker.overrun_stages;
                }
            }
            let obs = format!(
                "{walks} walks, max length - 4 ecc = {max_overhead}, {overruns} stages over their step allowance"
            );
            Ok((obs, true))
        },
    );
    r.check(
        "constructed walks are no shorter than circuit distances, graphs with at most 5 nodes",
        "length >= distance",
        false,
        || {
            let mut pairs_checked = 0;
            for n in 2..=5 {
                for g in connected_graphs_up_to_iso(n) {
                    let verts = enumerate_fstab_vertices(&g)?;
                    let mut walker = FstabWalker::new(&g, graph_center(&g)?)?;
                    let m = diameter_by_bfs(walker.polytope(), &verts, opts)?;
                    for (i, x) in verts.iter().enumerate() {
                        for (j, y) in verts.iter().enumerate() {
                            let (w, _) = walker.walk(x, y)?;
                            if w.len() < m[i][j] {
                                return Ok((
                                    format!(
                                        "walk of length {} below distance {}",
                                        w.len(),
                                        m[i][j]
                                    ),
                                    false,
                                ));
                            }
                            pairs_checked += 1;
                        }
                    }
                }
            }
            Ok((format!("{pairs_checked} pairs"), true))
        },
    );
}

/// Bounded polytope whose rows have coefficients of a single sign.
fn random_single_sign_polytope(rng: &mut ChaCha8Rng) -> Result<HPolytope> {
    let n = rng.gen_range(3..=5);
    let mut rows = Vec::new();
    let all_pos: Vec<(usize, i64)> = (0..n).map(|j| (j, rng.gen_range(1..=3))).collect();
    rows.push(Constraint::sparse(
        n,
        &all_pos,
        Rational::from_int(rng.gen_range(2..=6)),
        "a0",
    ));
    for i in 0..rng.gen_range(1..=4) {
        let e: Vec<(usize, i64)> = (0..n).map(|j| (j, rng.gen_range(0..=2))).collect();
        rows.push(Constraint::sparse(
            n,
            &e,
            Rational::from_int(rng.gen_range(1..=6)),
            format!("a{}", i + 1),
        ));
    }
    for j in 0..n {
        rows.push(Constraint::sparse(
            n,
            &[(j, -1)],
            Rational::zero(),
            format!("x{j} >= 0"),
        ));
    }
    for i in 0..rng.gen_range(0..=3) {
        let e: Vec<(usize, i64)> = (0..n).map(|j| (j, -rng.gen_range(0..=2))).collect();
        rows.push(Constraint::sparse(
            n,
            &e,
            Rational::from_int(-rng.gen_range(0..=1)),
            format!("b{i}"),
        ));
    }
    HPolytope::new(n, vec![], rows, true)
}

fn single_sign_violations(p: &HPolytope, opts: &VerifyOptions) -> Result<(usize, usize)> {
    let cs = enumerate_circuits(p, opts.budget)?;
    let mut signed = 0;
    let mut bad = 0;
    for c in cs.iter() {
        let d = &c.direction;
        if d.iter().all(|a| !a.is_negative()) || d.iter().all(|a| !a.is_positive()) {
            signed += 1;
            if d.support().len() != 1 {
                bad += 1;
            }
        }
    }
    Ok((bad, signed))
}

fn nonneg_circuits(r: &mut VerificationReport, opts: &VerifyOptions) {
    for n in [4, 5] {
        r.check(
            &format!("sign-definite circuits of the matching polytope, n = {n}"),
            "all unit vectors",
            false,
            || {
                let (bad, signed) = single_sign_violations(&build_matching_polytope(n)?, opts)?;
                Ok((
                    format!("{} of {signed} unit vectors", signed - bad),
                    bad == 0 && signed > 0,
                ))
            },
        );
    }
    r.check(
        "sign-definite circuits of 50 random single-sign polytopes",
        "all unit vectors",
        true,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(2));
            let (mut bad, mut signed) = (0, 0);
            for _ in 0..50 {
                let (b, s) = single_sign_violations(&random_single_sign_polytope(&mut rng)?, opts)?;
                bad += b;
                signed += s;
            }
            Ok((
                format!("{} of {signed} unit vectors", signed - bad),
                bad == 0,
            ))
        },
    );
}

fn walk_invariants(r: &mut VerificationReport, opts: &VerifyOptions) {
    r.check(
        "random maximal circuit steps on family polytopes",
        "10000 steps land on the boundary",
        true,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(3));
            let mut setups = Vec::new();
            for n in [3, 4] {
                let p = build_matching_polytope(n)?;
                let verts = chis(&EdgeIndex::new(n), &enumerate_matchings(n)?);
                setups.push((p, verts));
            }
            let p = build_perfect_matching_polytope(4)?;
            let verts = chis(&EdgeIndex::new(4), &enumerate_perfect_matchings(4)?);
            setups.push((p, verts));
            let p = build_tsp_polytope(5, false)?;
            let (_, verts) = tours_as_vectors(5)?;
            setups.push((p, verts));
            for g in [Graph::complete(3), Graph::cycle(5), Graph::path(4)] {
                let verts = enumerate_fstab_vertices(&g)?;
                setups.push((build_fstab_polytope(&g)?, verts));
            }
            let sets: Vec<_> = setups
                .iter()
                .map(|(p, _)| enumerate_circuits(p, opts.budget))
                .collect::<Result<_>>()?;
            let (mut steps, mut stuck) = (0, 0);
            let mut current: Vec<RationalVector> =
                setups.iter().map(|(_, v)| v[0].clone()).collect();
            while steps < 10_000 {
                let k = rng.gen_range(0..setups.len());
                let p = &setups[k].0;
                if rng.gen_bool(0.1) {
                    current[k] = setups[k].1.choose(&mut rng).expect("vertices").clone();
                }
                let c = &sets[k].circuits()[rng.gen_range(0..sets[k].len())];
                let dir = if rng.gen_bool(0.5) {
                    c.direction.clone()
                } else {
                    c.direction.neg()
                };
                let s = match circuit_step(p, &current[k], &dir) {
                    Ok(s) => s,
                    Err(Error::NoStep) => {
                        stuck += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                steps += 1;
                if !p.contains(&s.to_point)? {
                    return Ok((format!("step {steps} leaves the polytope"), false));
                }
                let lands = p.inequalities().iter().enumerate().any(|(i, row)| {
                    row.coeffs.dot(&s.direction).is_positive()
                        && p.eval_inequality(i, &s.to_point) == row.rhs
                });
                if !lands {
                    return Ok((format!("step {steps} stops before the boundary"), false));
                }
                if !matches!(circuit_step(p, &s.to_point, &dir), Err(Error::NoStep)) {
                    return Ok((format!("step {steps} can be repeated"), false));
                }
                current[k] = s.to_point;
            }
            Ok((
                format!("{steps} steps, {stuck} blocked directions skipped"),
                true,
            ))
        },
    );
}
