//! Exact rational vectors and matrices: rank, kernels, scaling tests.
//!
//! Two independent rank routes are provided: plain rational Gaussian
//! elimination and multi-modular elimination over integerized rows. The
//! public [`rank`] uses the modular route when rows integerize into `i64`.

pub(crate) mod modular;
mod rational;

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use rational::Rational;

use crate::error::{Error, Result};

/// Ordered list of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn zeros(n: usize) -> Self {
        RationalVector(vec![Rational::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RationalVector(v.iter().map(|&x| Rational::from_int(x)).collect())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    /// Indices of the non-zero entries.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn dot(&self, other: &RationalVector) -> Rational {
        debug_assert_eq!(self.len(), other.len());
        let mut acc = Rational::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        acc
    }

    pub fn add(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> RationalVector {
        RationalVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> RationalVector {
        RationalVector(self.0.iter().map(|a| -a).collect())
    }

    /// `self + s * dir`
    pub fn add_scaled(&self, s: &Rational, dir: &RationalVector) -> RationalVector {
        RationalVector(
            self.0
                .iter()
                .zip(&dir.0)
                .map(|(a, d)| if d.is_zero() { a.clone() } else { a + &(s * d) })
                .collect(),
        )
    }

    /// Positive multiple of `self` with coprime integer entries. Zero stays zero.
    pub fn primitive(&self) -> RationalVector {
        match self.integer_scaled() {
            Some(ints) => RationalVector(ints.into_iter().map(Rational::from_bigint).collect()),
            None => self.clone(),
        }
    }

    /// Coprime integer entries of the positive primitive multiple; `None` for zero.
    pub fn integer_scaled(&self) -> Option<Vec<BigInt>> {
        if self.is_zero() {
            return None;
        }
        let mut l = BigInt::one();
        for x in &self.0 {
            if !x.is_zero() {
                l = l.lcm(&x.denom());
            }
        }
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|x| x.numer() * (&l / x.denom()))
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        Some(ints.into_iter().map(|v| v / &g).collect())
    }

    /// Entries scaled by a positive factor into `i64`, preserving direction.
    /// `None` if they overflow. The zero vector maps to zeros.
    pub fn to_int_row(&self) -> Option<Vec<i64>> {
        if self.is_zero() {
            return Some(vec![0; self.len()]);
        }
        if let Some(row) = self.small_int_row() {
            return Some(row);
        }
        self.integer_scaled()?
            .iter()
            .map(|v| v.to_i64().filter(|&x| x != i64::MIN))
            .collect()
    }

    fn small_int_row(&self) -> Option<Vec<i64>> {
        let mut l: i64 = 1;
        for x in &self.0 {
            let (_, d) = x.as_small()?;
            l = l.checked_mul(d / rational::gcd_i64(l, d))?;
        }
        self.0
            .iter()
            .map(|x| {
                let (n, d) = x.as_small()?;
                n.checked_mul(l / d).filter(|&v| v != i64::MIN)
            })
            .collect()
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl FromIterator<Rational> for RationalVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RationalVector(iter.into_iter().collect())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Dense matrix of rationals; all rows share `ncols`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: Vec<RationalVector>,
    ncols: usize,
}

impl RationalMatrix {
    pub fn new(rows: Vec<RationalVector>, ncols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: ncols,
                found: bad.len(),
            });
        }
        Ok(RationalMatrix { rows, ncols })
    }

    pub fn from_ints(rows: &[Vec<i64>], ncols: usize) -> Result<Self> {
        Self::new(
            rows.iter().map(|r| RationalVector::from_ints(r)).collect(),
            ncols,
        )
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        RationalMatrix {
            rows: vec![RationalVector::zeros(ncols); nrows],
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        RationalMatrix {
            rows: (0..n).map(|i| RationalVector::unit(n, i)).collect(),
            ncols: n,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[RationalVector] {
        &self.rows
    }

    pub fn mul_vec(&self, v: &RationalVector) -> RationalVector {
        self.rows.iter().map(|r| r.dot(v)).collect()
    }

    /// Rows as `i64` integer multiples, if every row integerizes.
    pub(crate) fn int_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.rows.iter().map(RationalVector::to_int_row).collect()
    }
}

/// Reduced row echelon form by rational Gaussian elimination.
/// Returns the reduced rows (non-zero only) and their pivot columns.
fn rref(m: &RationalMatrix) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut a: Vec<Vec<Rational>> = m.rows.iter().map(|r| r.0.clone()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut().skip(c) {
            *x = &*x * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Exact rank by rational Gaussian elimination.
pub fn rank_by_elimination(m: &RationalMatrix) -> usize {
    rref(m).1.len()
}

/// Exact rank.
pub fn rank(m: &RationalMatrix) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    if let Some(rows) = m.int_rows() {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        if let Some(r) = modular::rank_of_int_rows(&refs, m.ncols, None) {
            return r;
        }
    }
    rank_by_elimination(m)
}

/// Basis of `{y : M y = 0}`, each vector primitive integer.
/// Empty iff `M` has full column rank.
pub fn nullspace_basis(m: &RationalMatrix) -> Vec<RationalVector> {
    let (a, pivots) = rref(m);
    let mut is_pivot = vec![false; m.ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.ncols).filter(|&c| !is_pivot[c]) {
        let mut v = RationalVector::zeros(m.ncols);
        v.0[free] = Rational::one();
        for (row, &pc) in a.iter().zip(&pivots) {
            if !row[free].is_zero() {
                v.0[pc] = -&row[free];
            }
        }
        basis.push(v.primitive());
    }
    basis
}

/// Non-zero spanning vector of `Ker(M)` when it is one-dimensional.
pub fn unique_nullspace_solution(m: &RationalMatrix) -> Option<RationalVector> {
    let mut basis = nullspace_basis(m);
    if basis.len() == 1 {
        basis.pop()
    } else {
        None
    }
}

/// Whether `u = λ v` for some scalar λ (λ = 0 only when `u = 0`).
pub fn is_scaling_of(u: &RationalVector, v: &RationalVector) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            found: u.len(),
        });
    }
    if u.is_zero() {
        return Ok(true);
    }
    let Some(i) = v.0.iter().position(|x| !x.is_zero()) else {
        return Ok(false);
    };
    let lambda = &u[i] / &v[i];
    Ok(u.0.iter().zip(&v.0).all(|(a, b)| *a == &lambda * b))
}

/// Primitive integer form with the first non-zero entry positive.
pub(crate) fn sign_canonical(v: &RationalVector) -> RationalVector {
    let p = v.primitive();
    match p.0.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => p.neg(),
        _ => p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        let n = rows.first().map_or(0, |r| r.len());
        RationalMatrix::from_ints(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), n).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RationalMatrix::identity(2)), 2);
        assert_eq!(rank(&RationalMatrix::zeros(3, 4)), 0);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank_by_elimination(&m(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace_basis(&RationalMatrix::identity(3)).is_empty());
        let b = nullspace_basis(&m(&[&[1, 1]]));
        assert_eq!(b.len(), 1);
        assert!(is_scaling_of(&b[0], &RationalVector::from_ints(&[1, -1])).unwrap());
    }

    #[test]
    fn unique_solution_examples() {
        let s = unique_nullspace_solution(&m(&[&[1, 1]])).unwrap();
        assert!(is_scaling_of(&s, &RationalVector::from_ints(&[1, -1])).unwrap());
        assert!(unique_nullspace_solution(&RationalMatrix::identity(3)).is_none());
        assert!(unique_nullspace_solution(&RationalMatrix::zeros(1, 2)).is_none());
    }

    #[test]
    fn scaling_examples() {
        let v = |xs: &[i64]| RationalVector::from_ints(xs);
        assert!(is_scaling_of(&v(&[2, -2]), &v(&[1, -1])).unwrap());
        assert!(!is_scaling_of(&v(&[1, 0]), &v(&[0, 1])).unwrap());
        assert!(is_scaling_of(&v(&[0, 0]), &v(&[1, 2])).unwrap());
        assert!(!is_scaling_of(&v(&[1, 2]), &v(&[0, 0])).unwrap());
        assert!(matches!(
            is_scaling_of(&v(&[1]), &v(&[1, 2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn primitive_scaling() {
        let v = RationalVector(vec![r(1, 2), r(-1, 2), r(0, 1)]);
        assert_eq!(v.primitive(), RationalVector::from_ints(&[1, -1, 0]));
        assert_eq!(
            sign_canonical(&RationalVector::from_ints(&[-2, 4])),
            RationalVector::from_ints(&[1, -2])
        );
        assert_eq!(
            sign_canonical(&RationalVector::from_ints(&[3, 0, 6])),
            RationalVector::from_ints(&[1, 0, 2])
        );
        assert_eq!(
            RationalVector(vec![r(2, 3), r(-4, 9)]).to_int_row(),
            Some(vec![6, -4])
        );
    }

    #[test]
    fn rational_matrix_rank_uses_denominators() {
        let a = RationalMatrix::new(
            vec![
                RationalVector(vec![r(1, 3), r(2, 3)]),
                RationalVector(vec![r(1, 2), r(1, 1)]),
            ],
            2,
        )
        .unwrap();
        assert_eq!(rank(&a), 1);
        assert_eq!(rank_by_elimination(&a), 1);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = RationalMatrix::new(vec![RationalVector::zeros(2), RationalVector::zeros(3)], 2);
        assert!(matches!(
            err,
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        ));
    }
}
