//! Polytope sources and point specifications.

use std::io::Read;
use std::path::Path;

use circuitlab::families::{
    build_matching_polytope, build_perfect_matching_polytope, build_tsp_polytope,
    enumerate_matchings, enumerate_perfect_matchings, enumerate_tours, tour_edges, EdgeIndex,
};
use circuitlab::fstab::{build_fstab_polytope, enumerate_fstab_vertices, Graph};
use circuitlab::{Error, HPolytope, Rational, RationalVector, Result};
use clap::ValueEnum;

use crate::Source;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Matching,
    Permatch,
    Tsp,
    Fstab,
}

/// A polytope together with whatever is known about where it came from.
pub struct Loaded {
    pub polytope: HPolytope,
    pub family: Option<(Family, usize)>,
    pub graph: Option<Graph>,
}

fn read_path(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn build(family: Family, n: usize, combs: bool) -> Result<HPolytope> {
    match family {
        Family::Matching => build_matching_polytope(n),
        Family::Permatch => build_perfect_matching_polytope(n),
        Family::Tsp => build_tsp_polytope(n, combs),
        Family::Fstab => build_fstab_polytope(&Graph::complete(n)),
    }
}

impl Loaded {
    pub fn from_source(src: &Source) -> Result<Self> {
        if let Some(path) = &src.polytope {
            return Self::from_json(&read_path(path)?);
        }
        if let Some(path) = &src.graph {
            if src.family.is_some_and(|f| f != Family::Fstab) {
                return Err(Error::InvalidArgument(
                    "--graph is only valid for the fstab family".into(),
                ));
            }
            let g = Graph::parse(&read_path(path)?)?;
            let polytope = build_fstab_polytope(&g)?;
            return Ok(Loaded {
                polytope,
                family: Some((Family::Fstab, g.node_count())),
                graph: Some(g),
            });
        }
        let (Some(family), Some(n)) = (src.family, src.n) else {
            return Err(Error::InvalidArgument(
                "give --polytope, --graph, or --family with --n".into(),
            ));
        };
        if src.combs && family != Family::Tsp {
            return Err(Error::InvalidArgument(
                "--combs applies to the tsp family only".into(),
            ));
        }
        let polytope = build(family, n, src.combs)?;
        let graph = (family == Family::Fstab).then(|| Graph::complete(n));
        Ok(Loaded {
            polytope,
            family: Some((family, n)),
            graph,
        })
    }

    /// Loads an H-representation and recognizes it when it is byte-identical
    /// to a generated family member.
    pub fn from_json(s: &str) -> Result<Self> {
        let polytope = HPolytope::from_json(s)?;
        let canonical = polytope.to_json();
        let d = polytope.ambient_dim();
        if let Some(g) = fstab_graph(&polytope) {
            if build_fstab_polytope(&g).is_ok_and(|q| q.to_json() == canonical) {
                let n = g.node_count();
                return Ok(Loaded {
                    polytope,
                    family: Some((Family::Fstab, n)),
                    graph: Some(g),
                });
            }
        }
        let n = (2..64).find(|n| n * (n - 1) / 2 == d);
        if let Some(n) = n {
            for (family, combs) in [
                (Family::Matching, false),
                (Family::Permatch, false),
                (Family::Tsp, false),
                (Family::Tsp, true),
            ] {
                if build(family, n, combs).is_ok_and(|q| q.to_json() == canonical) {
                    return Ok(Loaded {
                        polytope,
                        family: Some((family, n)),
                        graph: None,
                    });
                }
            }
        }
        Ok(Loaded {
            polytope,
            family: None,
            graph: None,
        })
    }

    pub fn vertices(&self) -> Result<Vec<RationalVector>> {
        let Some((family, n)) = self.family else {
            return Err(Error::InvalidArgument(
                "vertex enumeration needs a recognized family".into(),
            ));
        };
        let ix = EdgeIndex::new(n);
        Ok(match family {
            Family::Matching => enumerate_matchings(n)?.iter().map(|m| ix.chi(m)).collect(),
            Family::Permatch => enumerate_perfect_matchings(n)?
                .iter()
                .map(|m| ix.chi(m))
                .collect(),
            Family::Tsp => enumerate_tours(n)?
                .iter()
                .map(|t| ix.chi(&tour_edges(t)))
                .collect(),
            Family::Fstab => enumerate_fstab_vertices(self.graph.as_ref().expect("fstab graph"))?,
        })
    }

    /// Resolves a point: `empty`, `perfect`, a vertex index, or comma-separated rationals.
    pub fn point(&self, spec: &str) -> Result<RationalVector> {
        let spec = spec.trim();
        let edge_family = matches!(self.family, Some((Family::Matching | Family::Permatch, _)));
        let x = match (spec, self.family) {
            ("empty", Some((Family::Matching, n))) => RationalVector::zeros(n * (n - 1) / 2),
            ("perfect", Some((_, n))) if edge_family => {
                let edges: Vec<(usize, usize)> = (0..n / 2).map(|k| (2 * k, 2 * k + 1)).collect();
                EdgeIndex::new(n).chi(&edges)
            }
            _ if !spec.contains(',') && spec.parse::<usize>().is_ok() && self.family.is_some() => {
                let i: usize = spec.parse().expect("checked");
                let verts = self.vertices()?;
                verts.get(i).cloned().ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "vertex index {i} out of range (0..{})",
                        verts.len()
                    ))
                })?
            }
            _ => parse_vector(spec)?,
        };
        if x.len() != self.polytope.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.polytope.ambient_dim(),
                found: x.len(),
            });
        }
        Ok(x)
    }
}

pub fn parse_vector(s: &str) -> Result<RationalVector> {
    s.split(',')
        .map(|t| t.parse::<Rational>())
        .collect::<Result<Vec<_>>>()
        .map(RationalVector)
}

/// Reads the graph off an edge-row/non-negativity system with no equalities.
fn fstab_graph(p: &HPolytope) -> Option<Graph> {
    if !p.equalities().is_empty() {
        return None;
    }
    let mut edges = Vec::new();
    for row in p.inequalities() {
        let s = row.coeffs.support();
        let one = Rational::one();
        match s.as_slice() {
            [u, v] if row.coeffs[*u] == one && row.coeffs[*v] == one && row.rhs == one => {
                edges.push((*u, *v))
            }
            [u] if row.coeffs[*u] == -&one && row.rhs.is_zero() => {}
            _ => return None,
        }
    }
    Graph::new(p.ambient_dim(), &edges).ok()
}
