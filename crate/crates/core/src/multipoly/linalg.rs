//! Dense linear algebra over the rationals and over prime fields.
//!
//! Row reduction is written once against [`FieldOps`]; `Rationals` gives the
//! exact path and `PrimeField` the fast modular one. Rank over `Z/p` never
//! exceeds the rational rank, so agreement over several random primes is
//! taken as the rational rank, with the path recorded in [`RankPath`].

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub trait FieldOps: Sync {
    type Elem: Clone + PartialEq + std::fmt::Debug + Send + Sync;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Image of a rational; `None` when the denominator is not invertible.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;

    /// `row <- row - f * pivot` on the columns from `start` on.
    fn axpy(&self, row: &mut [Self::Elem], f: &Self::Elem, pivot: &[Self::Elem], start: usize) {
        for (a, b) in row[start..].iter_mut().zip(&pivot[start..]) {
            if !self.is_zero(b) {
                *a = self.sub(a, &self.mul(f, b));
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl FieldOps for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }
}

/// `Z/p` for a prime `p < 2^63`. Elements are kept in Montgomery form
/// (`a * 2^64 mod p`); use [`PrimeField::value`] to read a residue back.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
    /// `-p^{-1} mod 2^64`
    pinv: u64,
    /// `2^128 mod p`
    r2: u64,
    /// `2^64 mod p`, the Montgomery image of 1
    r1: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 63) && is_prime_u64(p), "{p} is not an odd prime below 2^63");
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r1 = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r1 as u128 * r1 as u128) % p as u128) as u64;
        PrimeField { p, pinv: inv.wrapping_neg(), r2, r1 }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv);
        let s = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = self.r1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &a);
            }
            a = self.mul(&a, &a);
            e >>= 1;
        }
        r
    }

    /// Field element of a residue in `[0, p)`.
    pub fn from_residue(&self, a: u64) -> u64 {
        self.redc(a as u128 * self.r2 as u128)
    }

    /// The residue in `[0, p)` represented by an element.
    pub fn value(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    /// Field element of an integer.
    pub fn reduce(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        self.from_residue(r.to_u64().expect("reduced residue fits"))
    }
}

impl FieldOps for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        self.r1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.redc(*a as u128 * *b as u128)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let d = self.reduce(q.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(&self.reduce(q.numer()), &self.inv(&d)))
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce(&BigInt::from(v))
    }
    fn axpy(&self, row: &mut [u64], f: &u64, pivot: &[u64], start: usize) {
        let f = *f as u128;
        for (a, &b) in row[start..].iter_mut().zip(&pivot[start..]) {
            if b != 0 {
                let t = self.redc(f * b as u128);
                *a = if *a >= t { *a - t } else { *a + self.p - t };
            }
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// `count` distinct random primes in `[2^60, 2^61)`, reproducible from `seed`.
pub fn random_primes(count: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let candidate = rng.gen_range((1u64 << 60)..(1u64 << 61)) | 1;
        if is_prime_u64(candidate) && !out.contains(&candidate) {
            out.push(candidate);
        }
    }
    out
}

/// Reduces `rows` in place to reduced row echelon form; returns pivot columns.
/// Zero rows are removed, so afterwards `rows.len()` is the rank.
pub fn rref<F: FieldOps>(f: &F, rows: &mut Vec<Vec<F::Elem>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]);
        if inv != f.one() {
            for v in rows[r][c..].iter_mut() {
                *v = f.mul(v, &inv);
            }
        }
        let (before, rest) = rows.split_at_mut(r);
        let (pivot, after) = rest.split_first_mut().expect("pivot row");
        for row in before.iter_mut().chain(after.iter_mut()) {
            if !f.is_zero(&row[c]) {
                let factor = row[c].clone();
                f.axpy(row, &factor, pivot, c);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Row echelon form without back substitution; returns the rank. Cheaper than
/// [`rref`] when only the rank is needed.
pub fn rank_in_place<F: FieldOps>(f: &F, rows: &mut [Vec<F::Elem>], cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot = &head[r];
        for row in tail.iter_mut() {
            if !f.is_zero(&row[c]) {
                let factor = f.mul(&row[c], &inv);
                f.axpy(row, &factor, pivot, c);
            }
        }
        r += 1;
    }
    r
}

pub fn rank<F: FieldOps>(f: &F, rows: &[Vec<F::Elem>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    rank_in_place(f, &mut m, cols)
}

/// Basis of `{v : M v = 0}` for the matrix with the given rows.
pub fn kernel<F: FieldOps>(f: &F, rows: &[Vec<F::Elem>], cols: usize) -> Vec<Vec<F::Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m, cols);
    let mut is_pivot = vec![None; cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = f.neg(&m[r][free]);
        }
        basis.push(v);
    }
    basis
}

/// Row echelon basis grown one vector at a time.
pub struct IncrementalEchelon<'a, F: FieldOps> {
    field: &'a F,
    cols: usize,
    /// pivot rows, normalised to 1 at their pivot, keyed by pivot column
    pivots: Vec<Option<Vec<F::Elem>>>,
    rank: usize,
}

impl<'a, F: FieldOps> IncrementalEchelon<'a, F> {
    pub fn new(field: &'a F, cols: usize) -> Self {
        IncrementalEchelon {
            field,
            cols,
            pivots: vec![None; cols],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Adds `v` to the span; returns false when it was already in it.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        let f = self.field;
        debug_assert_eq!(v.len(), self.cols);
        for c in 0..self.cols {
            if f.is_zero(&v[c]) {
                continue;
            }
            match &self.pivots[c] {
                Some(p) => {
                    let factor = v[c].clone();
                    f.axpy(&mut v, &factor, p, c);
                }
                None => {
                    let inv = f.inv(&v[c]);
                    for x in v[c..].iter_mut() {
                        *x = f.mul(x, &inv);
                    }
                    self.pivots[c] = Some(v);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }
}

/// A dense matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigRational>>) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            entries.extend(r);
        }
        RationalMatrix { rows: n, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Images of the rows modulo `p`, or `None` if a denominator vanishes there.
    pub fn reduce_mod(&self, field: &PrimeField) -> Option<Vec<Vec<u64>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|q| field.from_rational(q)).collect())
            .collect()
    }
}

/// Exact rank and a kernel basis; `rank + kernel.len() == cols`.
pub fn rank_kernel(m: &RationalMatrix) -> (usize, Vec<Vec<BigRational>>) {
    let kernel = kernel(&Rationals, &m.to_rows(), m.cols());
    (m.cols() - kernel.len(), kernel)
}

/// Which elimination produced a rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum RankPath {
    /// Fraction-free elimination over the integers.
    Exact,
    /// All listed primes gave the same rank.
    MultiModular { primes: Vec<u64> },
}

/// Fraction-free (Bareiss) rank of an integer matrix.
pub fn bareiss_rank(rows: &[Vec<BigInt>], cols: usize) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot = &head[r];
        for row in tail.iter_mut() {
            for j in c + 1..cols {
                let v = &pivot[c] * &row[j] - &row[c] * &pivot[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot[c].clone();
        r += 1;
    }
    r
}

/// Scales each row of a rational matrix to integers.
pub fn clear_denominators(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect()
}

/// Seed for the default prime triple; fixed so runs are reproducible.
pub const DEFAULT_PRIME_SEED: u64 = 0x6c69_6e65_615f_7072;

/// Rank by reduction modulo three random 61-bit primes, falling back to the
/// exact path if the primes disagree or a denominator vanishes.
pub fn multimodular_rank(rows: &[Vec<BigRational>], cols: usize) -> (usize, RankPath) {
    multimodular_rank_with(rows, cols, &random_primes(3, DEFAULT_PRIME_SEED))
}

pub fn multimodular_rank_with(rows: &[Vec<BigRational>], cols: usize, primes: &[u64]) -> (usize, RankPath) {
    let mut ranks = Vec::with_capacity(primes.len());
    for &p in primes {
        let field = PrimeField::new(p);
        let reduced: Option<Vec<Vec<u64>>> = rows
            .iter()
            .map(|row| row.iter().map(|q| field.from_rational(q)).collect())
            .collect();
        match reduced {
            Some(mut m) => ranks.push(rank_in_place(&field, &mut m, cols)),
            None => return (exact_rank(rows, cols), RankPath::Exact),
        }
    }
    if ranks.windows(2).all(|w| w[0] == w[1]) && !ranks.is_empty() {
        (ranks[0], RankPath::MultiModular { primes: primes.to_vec() })
    } else {
        (exact_rank(rows, cols), RankPath::Exact)
    }
}

pub fn exact_rank(rows: &[Vec<BigRational>], cols: usize) -> usize {
    bareiss_rank(&clear_denominators(rows), cols)
}

/// Sign-aware bit length, handy for monitoring coefficient growth.
pub fn bits(v: &BigInt) -> u64 {
    if v.sign() == Sign::NoSign {
        0
    } else {
        v.abs().bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn identity_has_full_rank() {
        let (r, k) = rank_kernel(&RationalMatrix::identity(3));
        assert_eq!(r, 3);
        assert!(k.is_empty());
    }

    #[test]
    fn zero_matrix_kernel() {
        let (r, k) = rank_kernel(&RationalMatrix::zeros(2, 5));
        assert_eq!(r, 0);
        assert_eq!(k.len(), 5);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = RationalMatrix::from_rows(3, vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        let (r, k) = rank_kernel(&m);
        assert_eq!(r, 1);
        for v in &k {
            for row in 0..m.rows() {
                let dot: BigRational = (0..3).map(|c| m.get(row, c) * &v[c]).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn primes_are_prime() {
        for p in random_primes(5, 1) {
            assert!(is_prime_u64(p));
            assert!(p >= 1 << 60);
        }
        assert!(is_prime_u64(2_305_843_009_213_693_951)); // 2^61 - 1
        assert!(!is_prime_u64(2_305_843_009_213_693_953));
    }

    #[test]
    fn montgomery_arithmetic_matches_plain_residues() {
        let p = random_primes(1, 7)[0];
        let f = PrimeField::new(p);
        let a = 123_456_789_012_345u64;
        let b = p - 98_765;
        let prod = ((a as u128 * b as u128) % p as u128) as u64;
        assert_eq!(f.value(f.mul(&f.from_residue(a), &f.from_residue(b))), prod);
        let x = f.from_residue(a);
        assert_eq!(f.mul(&x, &f.inv(&x)), f.one());
        assert_eq!(f.value(f.from_i64(-1)), p - 1);
    }

    #[test]
    fn bareiss_matches_rational_rank() {
        let rows = vec![
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)],
            vec![BigInt::from(3), BigInt::from(6), BigInt::from(4)],
        ];
        assert_eq!(bareiss_rank(&rows, 3), 2);
    }
}
