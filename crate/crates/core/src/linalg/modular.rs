//! Exact rank of integer row sets by multi-modular elimination.
//!
//! Over the rationals, a set of integer rows has rank `r` iff some `r × r`
//! minor is non-zero. Every minor is bounded in absolute value by the
//! Hadamard bound `H` (product of the Euclidean norms of its rows). If the
//! product of the primes used exceeds `H`, a non-zero minor cannot vanish
//! modulo all of them, so the rational rank equals the maximum of the ranks
//! modulo each prime. Rank modulo a prime never exceeds the rational rank.

use std::sync::OnceLock;

/// Number of primes kept in the table; enough for Hadamard bounds up to 2^900.
const PRIME_TABLE_LEN: usize = 30;
/// Every tabulated prime exceeds 2^30.
const BITS_PER_PRIME: u64 = 30;

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The largest primes below 2^31, in decreasing order.
pub(crate) fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_TABLE_LEN);
        let mut c = (1u64 << 31) - 1;
        while out.len() < PRIME_TABLE_LEN {
            if is_prime_u64(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn bit_len(v: u128) -> u64 {
    128 - v.leading_zeros() as u64
}

/// Number of primes needed so that their product exceeds the Hadamard bound
/// of any square minor drawn from `rows` (at most `ncols` rows per minor).
///
/// Returns `None` when the bound exceeds what the prime table covers.
pub(crate) fn primes_needed<'a>(
    rows: impl Iterator<Item = &'a [i64]>,
    ncols: usize,
) -> Option<usize> {
    let mut norm_bits: Vec<u64> = rows
        .map(|r| {
            let sq: u128 = r.iter().map(|&x| (x as i128 * x as i128) as u128).sum();
            bit_len(sq)
        })
        .collect();
    norm_bits.sort_unstable_by(|a, b| b.cmp(a));
    let total: u64 = norm_bits.iter().take(ncols).sum();
    // log2 H <= total / 2
    let log2_h = total.div_ceil(2);
    let k = (log2_h / BITS_PER_PRIME + 1) as usize;
    (k <= PRIME_TABLE_LEN).then_some(k)
}

/// Row echelon form modulo a single prime, with pivots scaled to 1.
#[derive(Clone, Debug)]
struct PrimeEchelon {
    p: u64,
    pivots: Vec<usize>,
    rows: Vec<Vec<u64>>,
}

impl PrimeEchelon {
    fn new(p: u64) -> Self {
        PrimeEchelon {
            p,
            pivots: Vec::new(),
            rows: Vec::new(),
        }
    }

    fn reduce(&self, row: &[i64]) -> Vec<u64> {
        let p = self.p;
        let pi = p as i64;
        let mut r: Vec<u64> = row.iter().map(|&x| x.rem_euclid(pi) as u64).collect();
        for (b, &c) in self.rows.iter().zip(&self.pivots) {
            let f = r[c];
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for (x, &y) in r.iter_mut().zip(b.iter()).skip(c) {
                if y != 0 {
                    *x = (*x + nf * y) % p;
                }
            }
        }
        r
    }

    /// Adds the row if it is independent mod p; reports whether it was.
    fn push(&mut self, row: &[i64]) -> bool {
        let mut r = self.reduce(row);
        let Some(c) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(r[c], self.p);
        for x in r.iter_mut().skip(c) {
            *x = *x * inv % self.p;
        }
        self.pivots.push(c);
        self.rows.push(r);
        true
    }

    fn truncate(&mut self, len: usize) {
        self.pivots.truncate(len);
        self.rows.truncate(len);
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// A non-zero kernel vector when the echelon has exactly one free column.
    fn kernel_vector(&self, ncols: usize) -> Option<Vec<u64>> {
        if self.rank() + 1 != ncols {
            return None;
        }
        let p = self.p;
        let mut is_pivot = vec![false; ncols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let free = is_pivot.iter().position(|&b| !b)?;
        let mut x = vec![0u64; ncols];
        x[free] = 1;
        // later rows have larger pivot columns; solve bottom-up
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.pivots[i]));
        for i in order {
            let c = self.pivots[i];
            let row = &self.rows[i];
            let mut s = 0u64;
            for j in (c + 1)..ncols {
                if row[j] != 0 && x[j] != 0 {
                    s = (s + row[j] * x[j]) % p;
                }
            }
            x[c] = (p - s) % p;
        }
        Some(x)
    }
}

/// Incremental exact echelon over several primes.
///
/// `rank()` is the exact rational rank of the pushed rows provided the
/// prime count was chosen with [`primes_needed`] over a superset of them.
#[derive(Clone, Debug)]
pub(crate) struct ModEchelon {
    ncols: usize,
    per_prime: Vec<PrimeEchelon>,
    history: Vec<Vec<usize>>,
}

impl ModEchelon {
    pub(crate) fn new(ncols: usize, prime_count: usize) -> Self {
        let per_prime = primes()[..prime_count.max(1)]
            .iter()
            .map(|&p| PrimeEchelon::new(p))
            .collect();
        ModEchelon {
            ncols,
            per_prime,
            history: Vec::new(),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.per_prime
            .iter()
            .map(PrimeEchelon::rank)
            .max()
            .unwrap_or(0)
    }

    /// Pushes a row; returns true iff the exact rank grew.
    pub(crate) fn push(&mut self, row: &[i64]) -> bool {
        debug_assert_eq!(row.len(), self.ncols);
        let before = self.rank();
        let lens: Vec<usize> = self.per_prime.iter().map(PrimeEchelon::rank).collect();
        for e in &mut self.per_prime {
            e.push(row);
        }
        self.history.push(lens);
        self.rank() > before
    }

    /// Undoes the most recent push.
    pub(crate) fn pop(&mut self) {
        if let Some(lens) = self.history.pop() {
            for (e, len) in self.per_prime.iter_mut().zip(lens) {
                e.truncate(len);
            }
        }
    }

    /// Kernel vector modulo the first prime that attains full rank `ncols - 1`,
    /// normalized so that its first non-zero entry is 1. Used as a hash key.
    pub(crate) fn kernel_key(&self) -> Option<(u64, Vec<u64>)> {
        let e = self.per_prime.iter().find(|e| e.rank() + 1 == self.ncols)?;
        let mut v = e.kernel_vector(self.ncols)?;
        let lead = *v.iter().find(|&&x| x != 0)?;
        let inv = inv_mod(lead, e.p);
        for x in v.iter_mut() {
            *x = *x * inv % e.p;
        }
        Some((e.p, v))
    }
}

/// Exact rank of integer rows, stopping early once `stop_at` is reached.
///
/// Returns `None` if the entries are too large for the prime table.
pub(crate) fn rank_of_int_rows(
    rows: &[&[i64]],
    ncols: usize,
    stop_at: Option<usize>,
) -> Option<usize> {
    let k = primes_needed(rows.iter().copied(), ncols)?;
    Some(rank_with_primes(rows, ncols, k, stop_at))
}

/// Same as [`rank_of_int_rows`] with a prime count already known to suffice.
pub(crate) fn rank_with_primes(
    rows: &[&[i64]],
    ncols: usize,
    k: usize,
    stop_at: Option<usize>,
) -> usize {
    let target = stop_at.unwrap_or(usize::MAX).min(ncols).min(rows.len());
    // sparse rows first: unit rows clear whole columns cheaply
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| rows[i].iter().filter(|&&x| x != 0).count());
    let mut best = 0;
    for &p in &primes()[..k.max(1)] {
        let mut e = PrimeEchelon::new(p);
        for &i in &order {
            e.push(rows[i]);
            if e.rank() >= target {
                return e.rank();
            }
        }
        best = best.max(e.rank());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_table_is_prime_and_large() {
        let ps = primes();
        assert_eq!(ps.len(), PRIME_TABLE_LEN);
        assert_eq!(ps[0], 2_147_483_647);
        for &p in ps {
            assert!(is_prime_u64(p));
            assert!(p > 1 << BITS_PER_PRIME);
        }
    }

    #[test]
    fn detects_rank_hidden_modulo_a_single_prime() {
        // det = p0 * 1, zero modulo the first prime but non-zero over Q
        let p0 = primes()[0] as i64;
        let rows: [&[i64]; 2] = [&[p0, 0], &[0, 1]];
        assert_eq!(rank_of_int_rows(&rows, 2, None), Some(2));
    }

    #[test]
    fn echelon_push_pop() {
        let mut e = ModEchelon::new(3, 1);
        assert!(e.push(&[1, 2, 3]));
        assert!(!e.push(&[2, 4, 6]));
        assert!(e.push(&[0, 1, 1]));
        assert_eq!(e.rank(), 2);
        let (p, key) = e.kernel_key().unwrap();
        // kernel of {(1,2,3),(0,1,1)} is span (1,1,-1)
        assert_eq!(key, vec![1, 1, p - 1]);
        e.pop();
        e.pop();
        assert_eq!(e.rank(), 1);
    }
}
