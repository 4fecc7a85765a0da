//! Matching, perfect matching and travelling salesman polytopes of `K_n`.
//!
//! Nodes are `0..n`. Edge `{i, j}` with `i < j` maps to a coordinate in
//! lexicographic order of the pair.

use crate::error::{Error, Result};
use crate::linalg::{Rational, RationalVector};
use crate::polytope::{Constraint, HPolytope};
use crate::walk::{validate_walk, Walk};

/// An edge set of `K_n` as normalized pairs `(i, j)`, `i < j`, sorted.
pub type EdgeSet = Vec<(usize, usize)>;

const MAX_ODD_SET_N: usize = 14;
const MAX_ENUM_N: usize = 12;
const MAX_TOUR_N: usize = 10;

/// Lexicographic bijection between node pairs and coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeIndex {
    n: usize,
}

impl EdgeIndex {
    pub fn new(n: usize) -> Self {
        EdgeIndex { n }
    }

    pub fn nodes(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, u: usize, v: usize) -> usize {
        let (i, j) = if u < v { (u, v) } else { (v, u) };
        debug_assert!(i != j && j < self.n);
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    pub fn pair(&self, k: usize) -> (usize, usize) {
        let mut k = k;
        for i in 0..self.n {
            let row = self.n - i - 1;
            if k < row {
                return (i, i + 1 + k);
            }
            k -= row;
        }
        panic!("edge index out of range");
    }

    /// Characteristic vector of an edge set.
    pub fn chi(&self, edges: &[(usize, usize)]) -> RationalVector {
        let mut v = RationalVector::zeros(self.len());
        for &(u, w) in edges {
            v.0[self.index(u, w)] = Rational::one();
        }
        v
    }

    /// Edges in the support of a 0/1 vector.
    pub fn edges_of(&self, x: &RationalVector) -> EdgeSet {
        x.support().into_iter().map(|k| self.pair(k)).collect()
    }
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn set_label(mask: u64, n: usize) -> String {
    let items: Vec<String> = (0..n)
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| i.to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

/// Subsets of `0..n` as bit masks, ordered by size then lexicographically.
fn subsets_by_size(n: usize, sizes: impl Fn(usize) -> bool) -> Vec<u64> {
    let mut out: Vec<u64> = (0u64..(1u64 << n))
        .filter(|m| sizes(m.count_ones() as usize))
        .collect();
    out.sort_by_key(|m| (m.count_ones(), std::cmp::Reverse(m.reverse_bits())));
    out
}

fn nonneg_rows(ix: &EdgeIndex) -> Vec<Constraint> {
    (0..ix.len())
        .map(|k| {
            let (u, v) = ix.pair(k);
            Constraint::sparse(
                ix.len(),
                &[(k, -1)],
                Rational::zero(),
                format!("x[{u},{v}] >= 0"),
            )
        })
        .collect()
}

fn degree_entries(ix: &EdgeIndex, v: usize, coef: i64) -> Vec<(usize, i64)> {
    (0..ix.nodes())
        .filter(|&u| u != v)
        .map(|u| (ix.index(u, v), coef))
        .collect()
}

fn inside_entries(ix: &EdgeIndex, mask: u64, coef: i64) -> Vec<(usize, i64)> {
    let nodes: Vec<usize> = (0..ix.nodes()).filter(|&i| mask >> i & 1 == 1).collect();
    let mut out = Vec::new();
    for (a, &u) in nodes.iter().enumerate() {
        for &w in &nodes[a + 1..] {
            out.push((ix.index(u, w), coef));
        }
    }
    out
}

fn cut_entries(ix: &EdgeIndex, mask: u64, coef: i64) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for u in (0..ix.nodes()).filter(|&i| mask >> i & 1 == 1) {
        for w in (0..ix.nodes()).filter(|&i| mask >> i & 1 == 0) {
            out.push((ix.index(u, w), coef));
        }
    }
    out.sort_unstable();
    out
}

/// `x >= 0`, `x(δ(v)) <= 1` and `x(E[S]) <= (|S| - 1) / 2` for odd `|S| >= 3`.
pub fn build_matching_polytope(n: usize) -> Result<HPolytope> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "matching polytope needs n >= 2".into(),
        ));
    }
    if n > MAX_ODD_SET_N {
        return Err(Error::InvalidArgument(format!(
            "n = {n} exceeds the odd-set limit {MAX_ODD_SET_N}"
        )));
    }
    let ix = EdgeIndex::new(n);
    let m = ix.len();
    let mut rows = nonneg_rows(&ix);
    for v in 0..n {
        rows.push(Constraint::sparse(
            m,
            &degree_entries(&ix, v, 1),
            Rational::one(),
            format!("x(delta({v})) <= 1"),
        ));
    }
    for s in subsets_by_size(n, |k| k >= 3 && k % 2 == 1) {
        let k = s.count_ones() as i64;
        rows.push(Constraint::sparse(
            m,
            &inside_entries(&ix, s, 1),
            Rational::from_int((k - 1) / 2),
            format!("x(E[{}]) <= {}", set_label(s, n), (k - 1) / 2),
        ));
    }
    HPolytope::new(m, vec![], rows, true)
}

/// Degree equalities, `x(δ(S)) >= 1` for odd `3 <= |S| <= n - 1`
/// (stored as `-x(δ(S)) <= -1`) and `x >= 0`.
pub fn build_perfect_matching_polytope(n: usize) -> Result<HPolytope> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidArgument(
            "perfect matching polytope needs even n >= 2".into(),
        ));
    }
    if n > MAX_ODD_SET_N {
        return Err(Error::InvalidArgument(format!(
            "n = {n} exceeds the odd-set limit {MAX_ODD_SET_N}"
        )));
    }
    let ix = EdgeIndex::new(n);
    let m = ix.len();
    let eqs = (0..n)
        .map(|v| {
            Constraint::sparse(
                m,
                &degree_entries(&ix, v, 1),
                Rational::one(),
                format!("x(delta({v})) = 1"),
            )
        })
        .collect();
    let mut rows = Vec::new();
    for s in subsets_by_size(n, |k| k >= 3 && k < n && k % 2 == 1) {
        rows.push(Constraint::sparse(
            m,
            &cut_entries(&ix, s, -1),
            Rational::from_int(-1),
            format!("x(delta({})) >= 1", set_label(s, n)),
        ));
    }
    rows.extend(nonneg_rows(&ix));
    HPolytope::new(m, eqs, rows, true)
}

/// Number of comb rows generated for `K_n`: a triangle `{u,v,w}` and an
/// injective choice of teeth `u', v', w'` outside it.
pub fn comb_row_count(n: usize) -> usize {
    if n < 6 {
        return 0;
    }
    let tri = n * (n - 1) * (n - 2) / 6;
    tri * (n - 3) * (n - 4) * (n - 5)
}

/// Degree equalities `x(δ(v)) = 2`, subtour rows `x(E(S)) <= |S| - 1` for
/// `2 <= |S| <= n - 2`, `x >= 0`, and with `combs` every row
/// `x_uv + x_vw + x_wu + x_uu' + x_vv' + x_ww' <= 4`.
///
/// Complete only for `n <= 5`.
pub fn build_tsp_polytope(n: usize, combs: bool) -> Result<HPolytope> {
    if n < 3 {
        return Err(Error::InvalidArgument("TSP polytope needs n >= 3".into()));
    }
    if combs && n < 6 {
        return Err(Error::InvalidArgument("comb rows need n >= 6".into()));
    }
    if n > MAX_ODD_SET_N {
        return Err(Error::InvalidArgument(format!(
            "n = {n} exceeds the subtour limit {MAX_ODD_SET_N}"
        )));
    }
    let ix = EdgeIndex::new(n);
    let m = ix.len();
    let eqs = (0..n)
        .map(|v| {
            Constraint::sparse(
                m,
                &degree_entries(&ix, v, 1),
                Rational::from_int(2),
                format!("x(delta({v})) = 2"),
            )
        })
        .collect();
    let mut rows = nonneg_rows(&ix);
    for s in subsets_by_size(n, |k| k >= 2 && k + 2 <= n) {
        let k = s.count_ones() as i64;
        rows.push(Constraint::sparse(
            m,
            &inside_entries(&ix, s, 1),
            Rational::from_int(k - 1),
            format!("x(E({})) <= {}", set_label(s, n), k - 1),
        ));
    }
    if combs {
        for tri in subsets_by_size(n, |k| k == 3) {
            let t: Vec<usize> = (0..n).filter(|&i| tri >> i & 1 == 1).collect();
            let rest: Vec<usize> = (0..n).filter(|&i| tri >> i & 1 == 0).collect();
            for &a in &rest {
                for &b in rest.iter().filter(|&&b| b != a) {
                    for &c in rest.iter().filter(|&&c| c != a && c != b) {
                        let mut e = vec![
                            (ix.index(t[0], t[1]), 1),
                            (ix.index(t[1], t[2]), 1),
                            (ix.index(t[0], t[2]), 1),
                            (ix.index(t[0], a), 1),
                            (ix.index(t[1], b), 1),
                            (ix.index(t[2], c), 1),
                        ];
                        e.sort_unstable();
                        rows.push(Constraint::sparse(
                            m,
                            &e,
                            Rational::from_int(4),
                            format!("comb ({},{},{};{a},{b},{c}) <= 4", t[0], t[1], t[2]),
                        ));
                    }
                }
            }
        }
    }
    HPolytope::new(m, eqs, rows, n <= 5)
}

/// All matchings of `K_n`, including the empty one.
pub fn enumerate_matchings(n: usize) -> Result<Vec<EdgeSet>> {
    if n > MAX_ENUM_N {
        return Err(Error::InvalidArgument(format!(
            "n = {n} exceeds the enumeration limit {MAX_ENUM_N}"
        )));
    }
    fn rec(
        i: usize,
        n: usize,
        used: &mut Vec<bool>,
        cur: &mut EdgeSet,
        out: &mut Vec<EdgeSet>,
        perfect: bool,
    ) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        if used[i] {
            rec(i + 1, n, used, cur, out, perfect);
            return;
        }
        if !perfect {
            rec(i + 1, n, used, cur, out, perfect);
        }
        for j in i + 1..n {
            if !used[j] {
                used[i] = true;
                used[j] = true;
                cur.push((i, j));
                rec(i + 1, n, used, cur, out, perfect);
                cur.pop();
                used[i] = false;
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut vec![false; n], &mut Vec::new(), &mut out, false);
    for m in &mut out {
        m.sort_unstable();
    }
    Ok(out)
}

/// All perfect matchings of `K_n`, `n` even.
pub fn enumerate_perfect_matchings(n: usize) -> Result<Vec<EdgeSet>> {
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(
            "perfect matchings need even n".into(),
        ));
    }
    Ok(enumerate_matchings(n)?
        .into_iter()
        .filter(|m| 2 * m.len() == n)
        .collect())
}

/// Lexicographically least rotation or reflection of a cyclic node sequence.
pub fn canonical_tour(seq: &[usize]) -> Vec<usize> {
    let k = seq.len();
    let mut best: Option<Vec<usize>> = None;
    for rev in [false, true] {
        let s: Vec<usize> = if rev {
            seq.iter().rev().copied().collect()
        } else {
            seq.to_vec()
        };
        for r in 0..k {
            let cand: Vec<usize> = (0..k).map(|i| s[(r + i) % k]).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Hamiltonian cycles of `K_n` in canonical form, in lexicographic order.
pub fn enumerate_tours(n: usize) -> Result<Vec<Vec<usize>>> {
    if !(3..=MAX_TOUR_N).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "tours need 3 <= n <= {MAX_TOUR_N}"
        )));
    }
    fn rec(seq: &mut Vec<usize>, used: &mut Vec<bool>, n: usize, out: &mut Vec<Vec<usize>>) {
        if seq.len() == n {
            if seq[1] < seq[n - 1] {
                out.push(seq.clone());
            }
            return;
        }
        for v in 1..n {
            if !used[v] {
                used[v] = true;
                seq.push(v);
                rec(seq, used, n, out);
                seq.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; n];
    used[0] = true;
    rec(&mut vec![0], &mut used, n, &mut out);
    Ok(out)
}

/// Edges of a tour given as a cyclic node sequence.
pub fn tour_edges(seq: &[usize]) -> EdgeSet {
    let k = seq.len();
    let mut e: EdgeSet = (0..k).map(|i| norm(seq[i], seq[(i + 1) % k])).collect();
    e.sort_unstable();
    e
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Trivial,
    Path,
    Cycle,
}

/// A connected component of `(V, M1 Δ M2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub kind: ComponentKind,
    pub nodes: Vec<usize>,
    pub edges: EdgeSet,
}

fn sym_diff(m1: &[(usize, usize)], m2: &[(usize, usize)]) -> EdgeSet {
    let mut out: EdgeSet = m1
        .iter()
        .filter(|e| !m2.contains(e))
        .chain(m2.iter().filter(|e| !m1.contains(e)))
        .copied()
        .collect();
    out.sort_unstable();
    out
}

/// Components of `(V, M1 Δ M2)` on nodes `0..n`, trivial ones included.
pub fn symmetric_difference_components(
    m1: &[(usize, usize)],
    m2: &[(usize, usize)],
    n: usize,
) -> Vec<Component> {
    let d = sym_diff(m1, m2);
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &d {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut nodes = Vec::new();
        while let Some(u) = stack.pop() {
            nodes.push(u);
            for &w in &adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        nodes.sort_unstable();
        let edges: EdgeSet = d.iter().filter(|&&(u, _)| comp[u] == id).copied().collect();
        let kind = match edges.len() {
            0 => ComponentKind::Trivial,
            k if k == nodes.len() => ComponentKind::Cycle,
            _ => ComponentKind::Path,
        };
        out.push(Component { kind, nodes, edges });
    }
    out
}

fn flip(m: &[(usize, usize)], edges: &[(usize, usize)]) -> EdgeSet {
    sym_diff(m, edges)
}

fn checked_walk(p: &HPolytope, ix: &EdgeIndex, seq: Vec<EdgeSet>) -> Result<Walk> {
    let w = Walk::from_points(seq.iter().map(|m| ix.chi(m)).collect());
    let check = validate_walk(p, &w)?;
    if !check.valid {
        let (i, why) = check.violation.unwrap_or_default();
        return Err(Error::ConstructionFailed(format!("step {i}: {why}")));
    }
    Ok(w)
}

/// Walk from `χ(M1)` to `χ(M2)` flipping one non-trivial component of
/// `M1 Δ M2` per step.
pub fn matching_component_walk(
    p: &HPolytope,
    m1: &[(usize, usize)],
    m2: &[(usize, usize)],
    n: usize,
) -> Result<Walk> {
    let ix = EdgeIndex::new(n);
    let mut seq = vec![m1.to_vec()];
    for c in symmetric_difference_components(m1, m2, n) {
        if c.kind != ComponentKind::Trivial {
            let next = flip(seq.last().unwrap(), &c.edges);
            seq.push(next);
        }
    }
    checked_walk(p, &ix, seq)
}

/// Walk of length at most 2 between two matchings of `K_n`, `n >= 7`.
///
/// If both `M1 \ M2` and `M2 \ M1` are non-empty, the difference is a
/// circuit when `M1 Δ M2` has at least three components (trivial ones
/// counted); otherwise there are at most two non-trivial components to flip.
/// If `F = M1 Δ M2` lies on one side and `|F| >= 3`, the walk passes through
/// the matching obtained by adding an edge joining two edges of `F` to the
/// smaller matching.
pub fn matching_two_step_recipe(
    p: &HPolytope,
    m1: &[(usize, usize)],
    m2: &[(usize, usize)],
    n: usize,
) -> Result<Walk> {
    if n < 7 {
        return Err(Error::InvalidArgument(
            "the two-step recipe needs n >= 7".into(),
        ));
    }
    let ix = EdgeIndex::new(n);
    let m1: EdgeSet = {
        let mut v = m1.to_vec();
        v.sort_unstable();
        v
    };
    let m2: EdgeSet = {
        let mut v = m2.to_vec();
        v.sort_unstable();
        v
    };
    if m1 == m2 {
        return Ok(Walk::trivial(ix.chi(&m1)));
    }
    let only1: EdgeSet = m1.iter().filter(|e| !m2.contains(e)).copied().collect();
    let only2: EdgeSet = m2.iter().filter(|e| !m1.contains(e)).copied().collect();
    let comps = symmetric_difference_components(&m1, &m2, n);
    let w = if !only1.is_empty() && !only2.is_empty() {
        if comps.len() >= 3 {
            checked_walk(p, &ix, vec![m1.clone(), m2.clone()])?
        } else {
            matching_component_walk(p, &m1, &m2, n)?
        }
    } else {
        let f = if only1.is_empty() { &only2 } else { &only1 };
        if f.len() <= 2 {
            matching_component_walk(p, &m1, &m2, n)?
        } else {
            let e = norm(f[0].0, f[1].0);
            let mid = if only1.is_empty() {
                let mut t = m1.clone();
                t.push(e);
                t
            } else {
                let mut t = m2.clone();
                t.push(e);
                t
            };
            let mut mid = mid;
            mid.sort_unstable();
            checked_walk(p, &ix, vec![m1.clone(), mid, m2.clone()])?
        }
    };
    if w.len() > 2 {
        return Err(Error::ConstructionFailed(format!(
            "walk of length {} exceeds 2",
            w.len()
        )));
    }
    Ok(w)
}
