//! Fractional stable set polytope `{x >= 0 : x_u + x_v <= 1 for uv ∈ E}`.

mod graph;
mod walk;

pub use graph::{
    ball_decomposition, connected_graphs_up_to_iso, graph_center, graph_diameter,
    random_connected_graph, BallDecomposition, Graph,
};
pub use walk::{fstab_walk, FstabWalker, WalkStats, C_WALK};

use crate::error::{Error, Result};
use crate::linalg::{Rational, RationalVector};
use crate::polytope::{Constraint, HPolytope};

const MAX_VERTEX_SCAN_NODES: usize = 12;

/// Edge rows followed by non-negativity rows; no equalities.
pub fn build_fstab_polytope(g: &Graph) -> Result<HPolytope> {
    let n = g.node_count();
    if n < 2 || !g.is_connected() {
        return Err(Error::BadGraph);
    }
    let mut rows: Vec<Constraint> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            Constraint::sparse(
                n,
                &[(u, 1), (v, 1)],
                Rational::one(),
                format!("x[{u}] + x[{v}] <= 1"),
            )
        })
        .collect();
    rows.extend(
        (0..n).map(|u| Constraint::sparse(n, &[(u, -1)], Rational::zero(), format!("x[{u}] >= 0"))),
    );
    HPolytope::new(n, vec![], rows, true)
}

/// Half-integral point from doubled coordinates (`0, 1, 2` for `0, 1/2, 1`).
pub fn from_doubled(z: &[u8]) -> RationalVector {
    z.iter().map(|&d| Rational::new(d as i64, 2)).collect()
}

/// Doubled coordinates of a half-integral point in `[0, 1]`.
pub fn to_doubled(x: &RationalVector) -> Option<Vec<u8>> {
    x.iter()
        .map(|r| {
            let d = r * &Rational::from_int(2);
            match d.as_small() {
                Some((k @ 0..=2, 1)) => Some(k as u8),
                _ => None,
            }
        })
        .collect()
}

/// Every vertex, found by scanning `{0, 1/2, 1}^V` in lexicographic order.
pub fn enumerate_fstab_vertices(g: &Graph) -> Result<Vec<RationalVector>> {
    let n = g.node_count();
    if n > MAX_VERTEX_SCAN_NODES {
        return Err(Error::InvalidArgument(format!(
            "vertex scan limited to {MAX_VERTEX_SCAN_NODES} nodes"
        )));
    }
    let p = build_fstab_polytope(g)?;
    let mut out = Vec::new();
    let mut z = vec![0u8; n];
    loop {
        if g.edges().iter().all(|&(u, v)| z[u] + z[v] <= 2) {
            let x = from_doubled(&z);
            if p.is_vertex(&x)? {
                out.push(x);
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if z[i] < 2 {
                z[i] += 1;
                break;
            }
            z[i] = 0;
        }
    }
}

/// Graph-theoretic circuit test: `c` is a circuit iff the support of `c`
/// together with the edges `uv` with `c_u + c_v = 0` forms a connected graph.
pub fn is_fstab_circuit(g: &Graph, c: &RationalVector) -> Result<bool> {
    if c.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            found: c.len(),
        });
    }
    if c.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(support_graph_connected(
        g,
        |u| i64::from(!c[u].is_zero()),
        |u, v| (&c[u] + &c[v]).is_zero(),
    ))
}

/// Same test on a doubled integer direction.
pub(crate) fn is_fstab_circuit_int(g: &Graph, d: &[i8]) -> bool {
    d.iter().any(|&x| x != 0)
        && support_graph_connected(g, |u| d[u] as i64, |u, v| d[u] + d[v] == 0)
}

fn support_graph_connected(
    g: &Graph,
    val: impl Fn(usize) -> i64,
    cancels: impl Fn(usize, usize) -> bool,
) -> bool {
    let n = g.node_count();
    let support: Vec<usize> = (0..n).filter(|&u| val(u) != 0).collect();
    let Some(&s) = support.first() else {
        return false;
    };
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut stack = vec![s];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if !seen[w] && val(w) != 0 && cancels(u, w) {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == support.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::is_circuit;

    fn half(v: &[i64]) -> RationalVector {
        v.iter().map(|&k| Rational::new(k, 2)).collect()
    }

    #[test]
    fn single_edge() {
        let g = Graph::path(2);
        let p = build_fstab_polytope(&g).unwrap();
        assert_eq!(p.inequalities().len(), 3);
        let verts = enumerate_fstab_vertices(&g).unwrap();
        assert_eq!(verts, vec![half(&[0, 0]), half(&[0, 2]), half(&[2, 0])]);
        // (1/2, 1/2) is feasible but only one row is tight there
        assert!(!p.is_vertex(&half(&[1, 1])).unwrap());
    }

    #[test]
    fn triangle_vertices() {
        let g = Graph::complete(3);
        let p = build_fstab_polytope(&g).unwrap();
        assert_eq!(p.inequalities().len(), 6);
        let verts = enumerate_fstab_vertices(&g).unwrap();
        assert_eq!(verts.len(), 5);
        assert!(verts.contains(&half(&[1, 1, 1])));
        assert_eq!(
            p.tight_rows(&half(&[1, 1, 1])).unwrap().inequality_rows,
            vec![0, 1, 2]
        );
    }

    #[test]
    fn path_vertices_are_integral() {
        let verts = enumerate_fstab_vertices(&Graph::path(3)).unwrap();
        assert_eq!(verts.len(), 5);
        assert!(verts.iter().all(|x| x.iter().all(|r| r.is_integer())));
    }

    #[test]
    fn circuit_oracle_examples() {
        let g = Graph::path(2);
        assert!(is_fstab_circuit(&g, &RationalVector::from_ints(&[1, -1])).unwrap());
        assert!(!is_fstab_circuit(&g, &RationalVector::from_ints(&[1, 1])).unwrap());
        assert!(is_fstab_circuit(&g, &RationalVector::from_ints(&[0, 1])).unwrap());
        assert_eq!(
            is_fstab_circuit(&g, &RationalVector::zeros(2)),
            Err(Error::ZeroVector)
        );
        let k3 = Graph::complete(3);
        let p = build_fstab_polytope(&k3).unwrap();
        for c in [[1, -1, 1], [1, -1, 0], [1, 1, 1], [2, -1, 1]] {
            let c = RationalVector::from_ints(&c);
            assert_eq!(
                is_fstab_circuit(&k3, &c).unwrap(),
                is_circuit(&p, &c).unwrap().is_circuit()
            );
        }
    }

    #[test]
    fn rejects_bad_graphs() {
        assert_eq!(
            build_fstab_polytope(&Graph::new(1, &[]).unwrap()).unwrap_err(),
            Error::BadGraph
        );
        assert_eq!(
            build_fstab_polytope(&Graph::new(3, &[(0, 1)]).unwrap()).unwrap_err(),
            Error::BadGraph
        );
    }
}
