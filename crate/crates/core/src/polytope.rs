//! Rational H-polytopes `{x : Ax = b, Bx <= d}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{modular, rank, Rational, RationalMatrix, RationalVector};

/// One labeled row `coeffs · x (= | <=) rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: RationalVector,
    pub rhs: Rational,
    pub label: String,
}

impl Constraint {
    pub fn new(coeffs: RationalVector, rhs: Rational, label: impl Into<String>) -> Self {
        Constraint {
            coeffs,
            rhs,
            label: label.into(),
        }
    }

    /// Row with integer coefficients given as `(column, value)` pairs.
    pub fn sparse(
        n: usize,
        entries: &[(usize, i64)],
        rhs: Rational,
        label: impl Into<String>,
    ) -> Self {
        let mut coeffs = RationalVector::zeros(n);
        for &(c, v) in entries {
            coeffs.0[c] = &coeffs.0[c] + &Rational::from_int(v);
        }
        Constraint::new(coeffs, rhs, label)
    }
}

#[derive(Serialize, Deserialize)]
struct HRepFile {
    ambient_dim: usize,
    equalities: Vec<Constraint>,
    inequalities: Vec<Constraint>,
    description_complete: bool,
}

/// Row in sparse form for fast evaluation.
#[derive(Clone, Debug)]
struct SparseRow {
    entries: Vec<(usize, Rational)>,
}

impl SparseRow {
    fn from_dense(v: &RationalVector) -> Self {
        SparseRow {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    fn eval(&self, x: &RationalVector) -> Rational {
        let mut acc = Rational::zero();
        for (i, a) in &self.entries {
            let xi = &x.0[*i];
            if !xi.is_zero() {
                acc += &(a * xi);
            }
        }
        acc
    }

    fn eval_int(&self, g: &[i64]) -> Option<i128> {
        let mut acc: i128 = 0;
        for (i, a) in &self.entries {
            let gi = g[*i];
            if gi != 0 {
                let (n, d) = a.as_small()?;
                if d != 1 {
                    return None;
                }
                acc = acc.checked_add(n as i128 * gi as i128)?;
            }
        }
        Some(acc)
    }
}

pub(crate) type IntRows<'a> = (&'a [Vec<i64>], &'a [Vec<i64>], usize);

/// The system `{x ∈ R^n : Ax = b, Bx <= d}` with labeled rows.
///
/// `[A; B]` is required to have full column rank, which holds for every
/// bounded non-empty polytope in this representation.
#[derive(Clone, Debug)]
pub struct HPolytope {
    ambient_dim: usize,
    equalities: Vec<Constraint>,
    inequalities: Vec<Constraint>,
    description_complete: bool,
    eq_sparse: Vec<SparseRow>,
    ineq_sparse: Vec<SparseRow>,
    eq_int: Option<Vec<Vec<i64>>>,
    ineq_int: Option<Vec<Vec<i64>>>,
    prime_count: Option<usize>,
    eq_rank: usize,
}

/// Inequality rows active at a point. All equality rows are implicitly active.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightSet {
    pub equality_rows: Vec<usize>,
    pub inequality_rows: Vec<usize>,
}

impl HPolytope {
    pub fn new(
        ambient_dim: usize,
        equalities: Vec<Constraint>,
        inequalities: Vec<Constraint>,
        description_complete: bool,
    ) -> Result<Self> {
        for c in equalities.iter().chain(&inequalities) {
            if c.coeffs.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: c.coeffs.len(),
                });
            }
        }
        let eq_sparse = equalities
            .iter()
            .map(|c| SparseRow::from_dense(&c.coeffs))
            .collect();
        let ineq_sparse = inequalities
            .iter()
            .map(|c| SparseRow::from_dense(&c.coeffs))
            .collect();
        let eq_int: Option<Vec<Vec<i64>>> =
            equalities.iter().map(|c| c.coeffs.to_int_row()).collect();
        let ineq_int: Option<Vec<Vec<i64>>> =
            inequalities.iter().map(|c| c.coeffs.to_int_row()).collect();
        let prime_count = match (&eq_int, &ineq_int) {
            (Some(a), Some(b)) => {
                modular::primes_needed(a.iter().chain(b.iter()).map(|r| r.as_slice()), ambient_dim)
            }
            _ => None,
        };
        let mut p = HPolytope {
            ambient_dim,
            equalities,
            inequalities,
            description_complete,
            eq_sparse,
            ineq_sparse,
            eq_int,
            ineq_int,
            prime_count,
            eq_rank: 0,
        };
        p.eq_rank = p.rank_of_rows(&(0..p.equalities.len()).collect::<Vec<_>>(), &[]);
        let full = p.rank_of_rows(
            &(0..p.equalities.len()).collect::<Vec<_>>(),
            &(0..p.inequalities.len()).collect::<Vec<_>>(),
        );
        if full < ambient_dim {
            return Err(Error::NotFullColumnRank {
                rank: full,
                ncols: ambient_dim,
            });
        }
        Ok(p)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn equalities(&self) -> &[Constraint] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Constraint] {
        &self.inequalities
    }

    pub fn description_complete(&self) -> bool {
        self.description_complete
    }

    /// Labels of all rows, equalities first.
    pub fn row_labels(&self) -> Vec<&str> {
        self.equalities
            .iter()
            .chain(&self.inequalities)
            .map(|c| c.label.as_str())
            .collect()
    }

    pub fn equality_matrix(&self) -> RationalMatrix {
        RationalMatrix::new(
            self.equalities.iter().map(|c| c.coeffs.clone()).collect(),
            self.ambient_dim,
        )
        .expect("rows validated at construction")
    }

    pub fn inequality_matrix(&self) -> RationalMatrix {
        RationalMatrix::new(
            self.inequalities.iter().map(|c| c.coeffs.clone()).collect(),
            self.ambient_dim,
        )
        .expect("rows validated at construction")
    }

    /// Rank of the equality block `A`.
    pub fn equality_rank(&self) -> usize {
        self.eq_rank
    }

    /// Exact rank of the equality rows `eq` stacked with inequality rows `ineq`.
    pub(crate) fn rank_of_rows(&self, eq: &[usize], ineq: &[usize]) -> usize {
        self.rank_of_rows_capped(eq, ineq, None)
    }

    pub(crate) fn rank_of_rows_capped(
        &self,
        eq: &[usize],
        ineq: &[usize],
        stop_at: Option<usize>,
    ) -> usize {
        if let Some((ei, ii, k)) = self.int_rows() {
            let rows: Vec<&[i64]> = eq
                .iter()
                .map(|&i| ei[i].as_slice())
                .chain(ineq.iter().map(|&i| ii[i].as_slice()))
                .collect();
            return modular::rank_with_primes(&rows, self.ambient_dim, k, stop_at);
        }
        rank(&self.submatrix(eq, ineq))
    }

    pub(crate) fn submatrix(&self, eq: &[usize], ineq: &[usize]) -> RationalMatrix {
        let rows = eq
            .iter()
            .map(|&i| self.equalities[i].coeffs.clone())
            .chain(ineq.iter().map(|&i| self.inequalities[i].coeffs.clone()))
            .collect();
        RationalMatrix::new(rows, self.ambient_dim).expect("rows validated at construction")
    }

    /// Integer equality rows, inequality rows and the prime count for modular rank.
    pub(crate) fn int_rows(&self) -> Option<IntRows<'_>> {
        match (&self.eq_int, &self.ineq_int, self.prime_count) {
            (Some(a), Some(b), Some(k)) => Some((a, b, k)),
            _ => None,
        }
    }

    fn check_dim(&self, x: &RationalVector) -> Result<()> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `B_i · x` for inequality row `i`.
    pub fn eval_inequality(&self, i: usize, x: &RationalVector) -> Rational {
        self.ineq_sparse[i].eval(x)
    }

    /// `A_i · x` for equality row `i`.
    pub fn eval_equality(&self, i: usize, x: &RationalVector) -> Rational {
        self.eq_sparse[i].eval(x)
    }

    /// Sign pattern of `B g` for an integer direction, when it evaluates in `i128`.
    pub(crate) fn ineq_int_eval(&self, i: usize, g: &[i64]) -> Option<i128> {
        self.ineq_sparse[i].eval_int(g)
    }

    pub(crate) fn eq_int_eval(&self, i: usize, g: &[i64]) -> Option<i128> {
        self.eq_sparse[i].eval_int(g)
    }

    pub fn contains(&self, x: &RationalVector) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.contains_unchecked(x))
    }

    pub(crate) fn contains_unchecked(&self, x: &RationalVector) -> bool {
        self.eq_sparse
            .iter()
            .zip(&self.equalities)
            .all(|(r, c)| r.eval(x) == c.rhs)
            && self
                .ineq_sparse
                .iter()
                .zip(&self.inequalities)
                .all(|(r, c)| r.eval(x) <= c.rhs)
    }

    /// Whether `A g = 0`.
    pub fn in_kernel(&self, g: &RationalVector) -> bool {
        self.eq_sparse.iter().all(|r| r.eval(g).is_zero())
    }

    pub fn tight_rows(&self, x: &RationalVector) -> Result<TightSet> {
        if !self.contains(x)? {
            return Err(Error::NotInPolytope);
        }
        Ok(self.tight_rows_unchecked(x))
    }

    pub(crate) fn tight_rows_unchecked(&self, x: &RationalVector) -> TightSet {
        let inequality_rows = self
            .ineq_sparse
            .iter()
            .zip(&self.inequalities)
            .enumerate()
            .filter(|(_, (r, c))| r.eval(x) == c.rhs)
            .map(|(i, _)| i)
            .collect();
        TightSet {
            equality_rows: (0..self.equalities.len()).collect(),
            inequality_rows,
        }
    }

    /// Vertex test: equality rows plus tight inequality rows have full rank.
    pub fn is_vertex(&self, x: &RationalVector) -> Result<bool> {
        let t = self.tight_rows(x)?;
        Ok(
            self.rank_of_rows_capped(&t.equality_rows, &t.inequality_rows, Some(self.ambient_dim))
                == self.ambient_dim,
        )
    }

    /// Largest `α` with `x + α g ∈ P`.
    ///
    /// `Ok(None)` when no positive step exists; `Err(Unbounded)` when no row
    /// limits the motion.
    pub fn max_step(&self, x: &RationalVector, g: &RationalVector) -> Result<Option<Rational>> {
        self.check_dim(x)?;
        self.check_dim(g)?;
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        if !self.contains_unchecked(x) {
            return Err(Error::NotInPolytope);
        }
        if !self.in_kernel(g) {
            return Err(Error::NotInKernel);
        }
        self.max_step_unchecked(x, g)
    }

    /// [`max_step`](Self::max_step) without the membership and kernel checks.
    pub fn max_step_unchecked(
        &self,
        x: &RationalVector,
        g: &RationalVector,
    ) -> Result<Option<Rational>> {
        let mut best: Option<Rational> = None;
        for (r, c) in self.ineq_sparse.iter().zip(&self.inequalities) {
            let rate = r.eval(g);
            if !rate.is_positive() {
                continue;
            }
            let slack = &c.rhs - &r.eval(x);
            if slack.is_zero() {
                return Ok(None);
            }
            let a = &slack / &rate;
            if best.as_ref().is_none_or(|b| a < *b) {
                best = Some(a);
            }
        }
        match best {
            Some(a) => Ok(Some(a)),
            None => Err(Error::Unbounded),
        }
    }

    pub fn to_json(&self) -> String {
        let file = HRepFile {
            ambient_dim: self.ambient_dim,
            equalities: self.equalities.clone(),
            inequalities: self.inequalities.clone(),
            description_complete: self.description_complete,
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: HRepFile = serde_json::from_str(s)?;
        HPolytope::new(
            f.ambient_dim,
            f.equalities,
            f.inequalities,
            f.description_complete,
        )
    }
}
