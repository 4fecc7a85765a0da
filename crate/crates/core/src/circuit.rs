//! Circuit test, canonical form and exhaustive enumeration.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    modular::ModEchelon, sign_canonical, unique_nullspace_solution, RationalVector,
};
use crate::polytope::HPolytope;

/// Default number of search nodes allowed in [`enumerate_circuits`].
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A circuit direction in primitive integer form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Circuit {
    pub direction: RationalVector,
    /// First non-zero entry is positive.
    pub sign_canonical: bool,
    /// Inequality rows `R` with `B_R g = 0`; `[A; B_R]` has nullity one.
    pub certificate: Vec<usize>,
}

/// Outcome of the circuit test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CircuitVerdict {
    Circuit {
        certificate: Vec<usize>,
    },
    NotCircuit,
    /// The description is partial and the rows present do not certify a circuit.
    NotCertified,
}

impl CircuitVerdict {
    pub fn is_circuit(&self) -> bool {
        matches!(self, CircuitVerdict::Circuit { .. })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CircuitVerdict::Circuit { .. } => "true",
            CircuitVerdict::NotCircuit => "false",
            CircuitVerdict::NotCertified => "not-certified",
        }
    }
}

/// Scales `g` to coprime integers with a positive leading entry.
pub fn canonicalize(g: &RationalVector) -> Result<Circuit> {
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(Circuit {
        direction: sign_canonical(g),
        sign_canonical: true,
        certificate: Vec::new(),
    })
}

/// Rows of `B` annihilating `g`, or `None` if `A g != 0`.
pub(crate) fn annihilating_rows(p: &HPolytope, g: &RationalVector) -> Option<Vec<usize>> {
    let prim = g.primitive();
    if let Some(gi) = prim.to_int_row() {
        let fast = (|| {
            for i in 0..p.equalities().len() {
                if p.eq_int_eval(i, &gi)? != 0 {
                    return Some(None);
                }
            }
            let mut rows = Vec::new();
            for i in 0..p.inequalities().len() {
                if p.ineq_int_eval(i, &gi)? == 0 {
                    rows.push(i);
                }
            }
            Some(Some(rows))
        })();
        if let Some(r) = fast {
            return r;
        }
    }
    if !p.in_kernel(g) {
        return None;
    }
    Some(
        (0..p.inequalities().len())
            .filter(|&i| p.eval_inequality(i, g).is_zero())
            .collect(),
    )
}

/// Circuit test: `A g = 0` and `[A; B']` has nullity one, where `B'` holds
/// every row of `B` with `B_i g = 0`.
pub fn is_circuit(p: &HPolytope, g: &RationalVector) -> Result<CircuitVerdict> {
    if g.len() != p.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            found: g.len(),
        });
    }
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    let Some(rows) = annihilating_rows(p, g) else {
        return Ok(CircuitVerdict::NotCircuit);
    };
    let n = p.ambient_dim();
    let eq: Vec<usize> = (0..p.equalities().len()).collect();
    // g lies in the kernel, so the rank is at most n - 1
    if p.rank_of_rows_capped(&eq, &rows, Some(n - 1)) == n - 1 {
        Ok(CircuitVerdict::Circuit { certificate: rows })
    } else if p.description_complete() {
        Ok(CircuitVerdict::NotCircuit)
    } else {
        Ok(CircuitVerdict::NotCertified)
    }
}

/// Deduplicated sign-canonical circuits of one polytope.
#[derive(Clone, Debug, Default)]
pub struct CircuitSet {
    pub polytope_id: String,
    circuits: Vec<Circuit>,
    index: HashMap<RationalVector, usize>,
}

#[derive(Serialize, Deserialize)]
struct CircuitRecord {
    direction: RationalVector,
    certificate: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct CircuitSetFile {
    polytope_id: String,
    count: usize,
    circuits: Vec<CircuitRecord>,
}

impl CircuitSet {
    pub fn new(polytope_id: impl Into<String>) -> Self {
        CircuitSet {
            polytope_id: polytope_id.into(),
            ..Default::default()
        }
    }

    /// Inserts a canonical circuit; returns false if it was already present.
    pub fn insert(&mut self, c: Circuit) -> bool {
        if self.index.contains_key(&c.direction) {
            return false;
        }
        self.index.insert(c.direction.clone(), self.circuits.len());
        self.circuits.push(c);
        true
    }

    pub fn len(&self) -> usize {
        self.circuits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circuits.is_empty()
    }

    pub fn circuits(&self) -> &[Circuit] {
        &self.circuits
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Circuit> {
        self.circuits.iter()
    }

    /// Whether `g` is a non-zero multiple of a stored circuit.
    pub fn contains_direction(&self, g: &RationalVector) -> bool {
        !g.is_zero() && self.index.contains_key(&sign_canonical(g))
    }

    pub fn sort(&mut self) {
        self.circuits.sort_by(|a, b| a.direction.cmp(&b.direction));
        self.index = self
            .circuits
            .iter()
            .enumerate()
            .map(|(i, c)| (c.direction.clone(), i))
            .collect();
    }

    pub fn to_json(&self, p: &HPolytope) -> String {
        let labels = p.inequalities();
        let file = CircuitSetFile {
            polytope_id: self.polytope_id.clone(),
            count: self.circuits.len(),
            circuits: self
                .circuits
                .iter()
                .map(|c| CircuitRecord {
                    direction: c.direction.clone(),
                    certificate: c
                        .certificate
                        .iter()
                        .map(|&i| labels[i].label.clone())
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }
}

struct Enumerator<'a> {
    p: &'a HPolytope,
    rows: &'a [Vec<i64>],
    echelon: ModEchelon,
    target: usize,
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
    by_key: HashMap<(u64, Vec<u64>), Vec<usize>>,
    set: CircuitSet,
}

impl Enumerator<'_> {
    fn dfs(&mut self, start: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        let rank = self.echelon.rank();
        if rank == self.target {
            return self.leaf();
        }
        let need = self.target - rank;
        for i in start..self.rows.len() {
            if self.rows.len() - i < need {
                break;
            }
            if self.echelon.push(&self.rows[i]) {
                self.chosen.push(i);
                let r = self.dfs(i + 1);
                self.chosen.pop();
                self.echelon.pop();
                r?;
            } else {
                self.echelon.pop();
            }
        }
        Ok(())
    }

    fn annihilates(&self, g: &RationalVector) -> bool {
        self.chosen
            .iter()
            .all(|&i| self.p.eval_inequality(i, g).is_zero())
    }

    fn leaf(&mut self) -> Result<()> {
        let key = self.echelon.kernel_key();
        if let Some(k) = &key {
            if let Some(cands) = self.by_key.get(k) {
                if cands
                    .iter()
                    .any(|&c| self.annihilates(&self.set.circuits[c].direction))
                {
                    return Ok(());
                }
            }
        }
        let eq: Vec<usize> = (0..self.p.equalities().len()).collect();
        let m = self.p.submatrix(&eq, &self.chosen);
        let g = unique_nullspace_solution(&m).ok_or_else(|| Error::InvariantViolated {
            stage: "circuit enumeration".into(),
            detail: "leaf subset does not have nullity one".into(),
        })?;
        let dir = sign_canonical(&g);
        let idx = match self.set.index.get(&dir) {
            Some(&i) => i,
            None => {
                let certificate = annihilating_rows(self.p, &dir).unwrap_or_default();
                self.set.insert(Circuit {
                    direction: dir,
                    sign_canonical: true,
                    certificate,
                });
                self.set.len() - 1
            }
        };
        if let Some(k) = key {
            self.by_key.entry(k).or_default().push(idx);
        }
        Ok(())
    }
}

/// All circuits of a completely described polytope.
///
/// Searches subsets `R` of inequality rows that are independent together
/// with `A` and reach rank `n - 1`; the kernel of each such `[A; B_R]` is a
/// circuit and every circuit arises this way. `budget` bounds the number of
/// search nodes.
pub fn enumerate_circuits(p: &HPolytope, budget: u64) -> Result<CircuitSet> {
    enumerate_circuits_named(
        p,
        budget,
        format!("hrep-{}x{}", p.inequalities().len(), p.ambient_dim()),
    )
}

pub fn enumerate_circuits_named(
    p: &HPolytope,
    budget: u64,
    polytope_id: impl Into<String>,
) -> Result<CircuitSet> {
    if !p.description_complete() {
        return Err(Error::IncompleteDescription);
    }
    let n = p.ambient_dim();
    let (eq_rows, ineq_rows, k) = p.int_rows().ok_or_else(|| {
        Error::InvalidArgument("coefficients too large for circuit enumeration".into())
    })?;
    let mut echelon = ModEchelon::new(n, k);
    for r in eq_rows {
        echelon.push(r);
    }
    let mut e = Enumerator {
        p,
        rows: ineq_rows,
        echelon,
        target: n.saturating_sub(1),
        chosen: Vec::new(),
        nodes: 0,
        budget,
        by_key: HashMap::new(),
        set: CircuitSet::new(polytope_id),
    };
    if e.echelon.rank() < n {
        e.dfs(0)?;
    }
    let mut set = e.set;
    set.sort();
    Ok(set)
}

/// Circuit verdict for the difference of every unordered pair of points.
pub fn pairwise_circuit_report(
    p: &HPolytope,
    points: &[RationalVector],
) -> Result<Vec<(usize, usize, CircuitVerdict)>> {
    for x in points {
        if !p.contains(x)? {
            return Err(Error::NotInPolytope);
        }
    }
    let pairs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| ((i + 1)..points.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(i, j)| {
            let d = points[j].sub(&points[i]);
            Ok((i, j, is_circuit(p, &d)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rational;
    use crate::polytope::Constraint;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// `{x >= 0, x1 + x2 <= 1}`: the fractional stable set polytope of one edge.
    fn edge_triangle() -> HPolytope {
        HPolytope::new(
            2,
            vec![],
            vec![
                Constraint::sparse(2, &[(0, 1), (1, 1)], Rational::one(), "edge"),
                Constraint::sparse(2, &[(0, -1)], Rational::zero(), "x0>=0"),
                Constraint::sparse(2, &[(1, -1)], Rational::zero(), "x1>=0"),
            ],
            true,
        )
        .unwrap()
    }

    #[test]
    fn canonical_forms() {
        let c = canonicalize(&RationalVector(vec![r(1, 2), r(-1, 2), Rational::zero()])).unwrap();
        assert_eq!(c.direction, RationalVector::from_ints(&[1, -1, 0]));
        assert_eq!(
            canonicalize(&RationalVector::from_ints(&[-2, 4]))
                .unwrap()
                .direction,
            RationalVector::from_ints(&[1, -2])
        );
        assert_eq!(
            canonicalize(&RationalVector::from_ints(&[3, 0, 6]))
                .unwrap()
                .direction,
            RationalVector::from_ints(&[1, 0, 2])
        );
        assert_eq!(
            canonicalize(&RationalVector::zeros(2)),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn edge_triangle_circuits() {
        let p = edge_triangle();
        let set = enumerate_circuits(&p, DEFAULT_BUDGET).unwrap();
        let dirs: Vec<_> = set.iter().map(|c| c.direction.clone()).collect();
        assert_eq!(
            dirs,
            vec![
                RationalVector::from_ints(&[0, 1]),
                RationalVector::from_ints(&[1, -1]),
                RationalVector::from_ints(&[1, 0])
            ]
        );
        assert!(is_circuit(&p, &RationalVector::from_ints(&[-3, 3]))
            .unwrap()
            .is_circuit());
        assert_eq!(
            is_circuit(&p, &RationalVector::from_ints(&[1, 1])).unwrap(),
            CircuitVerdict::NotCircuit
        );
        assert_eq!(
            is_circuit(&p, &RationalVector::zeros(2)),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn certificate_is_maximal_annihilating_set() {
        let p = edge_triangle();
        match is_circuit(&p, &RationalVector::from_ints(&[1, -1])).unwrap() {
            CircuitVerdict::Circuit { certificate } => assert_eq!(certificate, vec![0]),
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn budget_is_enforced() {
        let p = edge_triangle();
        assert_eq!(
            enumerate_circuits(&p, 1).unwrap_err(),
            Error::BudgetExceeded { budget: 1 }
        );
    }

    #[test]
    fn incomplete_descriptions_are_not_enumerated() {
        let q = edge_triangle();
        let p = HPolytope::new(2, vec![], q.inequalities().to_vec(), false).unwrap();
        assert_eq!(
            enumerate_circuits(&p, DEFAULT_BUDGET).unwrap_err(),
            Error::IncompleteDescription
        );
        assert_eq!(
            is_circuit(&p, &RationalVector::from_ints(&[1, 1])).unwrap(),
            CircuitVerdict::NotCertified
        );
    }

    #[test]
    fn equality_constrained_simplex() {
        // x1 + x2 + x3 = 1, x >= 0: circuits are the three edge directions
        let p = HPolytope::new(
            3,
            vec![Constraint::sparse(
                3,
                &[(0, 1), (1, 1), (2, 1)],
                Rational::one(),
                "sum",
            )],
            (0..3)
                .map(|i| Constraint::sparse(3, &[(i, -1)], Rational::zero(), format!("x{i}>=0")))
                .collect(),
            true,
        )
        .unwrap();
        let set = enumerate_circuits(&p, DEFAULT_BUDGET).unwrap();
        assert_eq!(set.len(), 3);
        assert!(set.contains_direction(&RationalVector::from_ints(&[0, -2, 2])));
        assert_eq!(
            is_circuit(&p, &RationalVector::from_ints(&[1, 0, 0])).unwrap(),
            CircuitVerdict::NotCircuit
        );
        assert!(set.to_json(&p).contains("x0>=0"));
    }
}
