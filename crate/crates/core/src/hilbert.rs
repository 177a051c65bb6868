//! Hilbert functions and series.
//!
//! Three independent routes: closed forms for generic lines and points, the
//! standard monomials of an initial ideal, and ranks of Macaulay matrices.
//! Also the regularity of generic line arrangements and an upper bound for it.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::{binomial, Integer};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::RationalFunction1;
use crate::ideal_ops::{initial_ideal, GroebnerBasis, Ideal};
use crate::multipoly::linalg::{
    bareiss_rank, clear_denominators, random_primes, FieldOps, PrimeField, RankPath, DEFAULT_PRIME_SEED,
};
use crate::multipoly::{monomials_of_degree, Monomial};

/// `C(n, k)` as a big integer.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    binomial(BigUint::from(n), BigUint::from(k))
}

fn require_hh_range(m: u64, n: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::OutOfRange("need at least one line".into()));
    }
    if n < 3 {
        return Err(Error::OutOfRange(format!(
            "n = {n}: the generic-lines formula needs n >= 3 (two lines in P^2 already have h(2) = 5, not 6)"
        )));
    }
    Ok(())
}

/// Hilbert function of `m` generic lines in `P^n`: `min{C(n+d, d), m(d+1)}`.
pub fn hh_hilbert(m: u64, n: u64, d: u64) -> Result<u64> {
    require_hh_range(m, n)?;
    let cap = m * (d + 1);
    let c = binom(n + d, d);
    Ok(if c < BigUint::from(cap) { c.to_u64().expect("below cap") } else { cap })
}

/// Hilbert function of `p` general points in `P^n`: `min{C(n+d, d), p}`.
pub fn points_hilbert(p: u64, n: u64, d: u64) -> Result<u64> {
    if p == 0 || n == 0 {
        return Err(Error::OutOfRange("need p >= 1 and n >= 1".into()));
    }
    let c = binom(n + d, d);
    Ok(if c < BigUint::from(p) { c.to_u64().expect("below p") } else { p })
}

/// Series of `p` general points in `P^n`, over `1 - t`.
pub fn points_series(p: u64, n: u64) -> Result<RationalFunction1> {
    let mut values = Vec::new();
    for d in 0.. {
        let v = points_hilbert(p, n, d)?;
        values.push(BigInt::from(v));
        if v == p {
            break;
        }
    }
    Ok(RationalFunction1::from_eventually_constant(&values))
}

/// Smallest `alpha >= 0` with `C(n + alpha, alpha) >= m(alpha + 1)`; the
/// regularity of `m` generic lines in `P^n`.
pub fn regularity_alpha(m: u64, n: u64) -> Result<u64> {
    require_hh_range(m, n)?;
    let mut alpha = 0;
    while binom(n + alpha, alpha) < BigUint::from(m * (alpha + 1)) {
        alpha += 1;
    }
    Ok(alpha)
}

/// Hilbert series of `m` generic lines in `P^n` over `(1 - t)^2`.
///
/// The numerator is the second difference of the Hilbert function, which is
/// linear from degree `alpha` on.
pub fn hh_series(m: u64, n: u64) -> Result<RationalFunction1> {
    let alpha = regularity_alpha(m, n)?;
    let h: Vec<BigInt> = (0..=alpha + 1).map(|d| BigInt::from(hh_hilbert(m, n, d).expect("range checked"))).collect();
    let num = (0..h.len())
        .map(|k| {
            let at = |i: isize| if i < 0 { BigInt::zero() } else { h[i as usize].clone() };
            let k = k as isize;
            at(k) - at(k - 1) * 2 + at(k - 2)
        })
        .collect();
    Ok(RationalFunction1::new(num, 2))
}

/// Keeps the divisibility-minimal monomials (duplicates included), sorted by
/// degree.
fn minimal_monomials(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_shifted(a: &mut Vec<BigInt>, b: &[BigInt], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, BigInt::zero());
    }
    for (i, c) in b.iter().enumerate() {
        a[i + shift] += c;
    }
}

/// Numerator `K(t)` of `H_{S/M}(t) = K(t) / (1 - t)^{n+1}` for a monomial
/// ideal `M`, by pivoting on a variable shared by two generators:
/// `K(M) = K(M + (x)) + t K(M : x)`.
pub fn k_polynomial(gens: &[Monomial], nvars: usize) -> Vec<BigInt> {
    let gens = minimal_monomials(gens.to_vec());
    let mut counts = vec![0usize; nvars];
    for g in &gens {
        for (v, c) in counts.iter_mut().enumerate() {
            if g.exp(v) > 0 {
                *c += 1;
            }
        }
    }
    let pivot = (0..nvars).filter(|&v| counts[v] >= 2).max_by_key(|&v| (counts[v], std::cmp::Reverse(v)));
    let Some(v) = pivot else {
        // pairwise coprime generators form a regular sequence
        let mut k = vec![BigInt::one()];
        for g in &gens {
            let mut f = vec![BigInt::zero(); g.degree() as usize + 1];
            f[0] = BigInt::one();
            f[g.degree() as usize] -= 1;
            k = poly_mul(&k, &f);
        }
        return k;
    };
    let x = Monomial::var(v);
    let mut plus: Vec<Monomial> = gens.iter().filter(|g| g.exp(v) == 0).copied().collect();
    plus.push(x);
    let colon: Vec<Monomial> = gens.iter().map(|g| g.checked_div_var(v).unwrap_or(*g)).collect();
    let mut k = k_polynomial(&plus, nvars);
    poly_add_shifted(&mut k, &k_polynomial(&colon, nvars), 1);
    while k.len() > 1 && k.last().is_some_and(Zero::is_zero) {
        k.pop();
    }
    k
}

/// Hilbert series of `S/I` read off the initial ideal of `I`.
pub fn hilbert_series_gb(ideal: &Ideal) -> RationalFunction1 {
    series_of_basis(&ideal.groebner())
}

pub fn series_of_basis(gb: &GroebnerBasis) -> RationalFunction1 {
    if gb.is_unit() {
        return RationalFunction1::zero();
    }
    let lead = gb.leading_monomials();
    RationalFunction1::new(k_polynomial(&lead, gb.nvars()), gb.nvars() as u32)
}

/// `dim (S/I)_d` for `d = 0..=max_deg` from the initial ideal.
pub fn hilbert_values_gb(ideal: &Ideal, max_deg: u32) -> Vec<u64> {
    series_of_basis(&ideal.groebner()).series_expand(max_deg as usize).to_u64()
}

/// Number of degree-`d` monomials outside the initial ideal, by enumeration.
pub fn standard_monomial_count(gb: &GroebnerBasis, d: u32) -> u64 {
    let lead = initial_ideal(gb);
    let lead: Vec<Monomial> = lead.generators().iter().filter_map(|g| g.leading_monomial()).collect();
    monomials_of_degree(gb.nvars() - 1, d)
        .iter()
        .filter(|m| !lead.iter().any(|l| l.divides(m)))
        .count() as u64
}

/// `dim (S/I)_d` as `C(n+d, d)` minus the rank of the Macaulay matrix with
/// rows `u * g` for generators `g` and monomials `u` of complementary degree.
///
/// The rank is taken modulo three random primes and accepted when they agree;
/// `exact` forces fraction-free elimination over the integers.
pub fn hilbert_linalg(ideal: &Ideal, d: u32, exact: bool) -> Result<(u64, RankPath)> {
    ideal.require_homogeneous()?;
    let n = ideal.ambient_n();
    let monos = monomials_of_degree(n, d);
    let index: HashMap<Monomial, usize> = monos.iter().enumerate().map(|(k, m)| (*m, k)).collect();
    let mut rows: Vec<Vec<(usize, &BigRational)>> = Vec::new();
    for g in ideal.generators() {
        let e = g.degree().expect("nonzero generator");
        if e > d {
            continue;
        }
        for u in monomials_of_degree(n, d - e) {
            rows.push(g.terms().iter().map(|(m, c)| (index[&u.mul(m)], c)).collect());
        }
    }
    let cols = monos.len();
    let (rank, path) = if rows.is_empty() {
        (0, RankPath::Exact)
    } else if exact {
        (sparse_exact_rank(&rows, cols), RankPath::Exact)
    } else {
        sparse_multimodular_rank(&rows, cols)
    };
    Ok(((cols - rank) as u64, path))
}

/// `hilbert_linalg` for every degree up to `max_deg`.
pub fn hilbert_values_linalg(ideal: &Ideal, max_deg: u32, exact: bool) -> Result<(Vec<u64>, Vec<RankPath>)> {
    let mut values = Vec::new();
    let mut paths = Vec::new();
    for d in 0..=max_deg {
        let (v, p) = hilbert_linalg(ideal, d, exact)?;
        values.push(v);
        paths.push(p);
    }
    Ok((values, paths))
}

fn sparse_exact_rank(rows: &[Vec<(usize, &BigRational)>], cols: usize) -> usize {
    let dense: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![BigRational::zero(); cols];
            for &(c, q) in r {
                v[c] = q.clone();
            }
            v
        })
        .collect();
    bareiss_rank(&clear_denominators(&dense), cols)
}

/// Rank of a sparse rational matrix over `Z/p`, or `None` if some
/// denominator vanishes modulo `p`. Rows are reduced one at a time against
/// the pivots found so far, so only the echelon basis is held densely.
pub(crate) fn sparse_rank_mod(field: &PrimeField, rows: &[Vec<(usize, &BigRational)>], cols: usize) -> Option<usize> {
    let mut pivots: Vec<Option<Vec<u64>>> = vec![None; cols];
    let mut rank = 0;
    let mut row = vec![0u64; cols];
    for r in rows {
        row.iter_mut().for_each(|v| *v = 0);
        let mut first = cols;
        for &(c, q) in r {
            row[c] = field.from_rational(q)?;
            first = first.min(c);
        }
        for c in first..cols {
            if row[c] == 0 {
                continue;
            }
            match &pivots[c] {
                Some(p) => {
                    let f = row[c];
                    field.axpy(&mut row, &f, p, c);
                }
                None => {
                    let inv = field.inv(&row[c]);
                    let normalized: Vec<u64> = row.iter().map(|v| field.mul(v, &inv)).collect();
                    pivots[c] = Some(normalized);
                    rank += 1;
                    break;
                }
            }
        }
        if rank == cols {
            break;
        }
    }
    Some(rank)
}

fn sparse_multimodular_rank(rows: &[Vec<(usize, &BigRational)>], cols: usize) -> (usize, RankPath) {
    let primes = random_primes(3, DEFAULT_PRIME_SEED);
    let mut ranks = Vec::new();
    for &p in &primes {
        match sparse_rank_mod(&PrimeField::new(p), rows, cols) {
            Some(r) => ranks.push(r),
            None => return (sparse_exact_rank(rows, cols), RankPath::Exact),
        }
    }
    if ranks.windows(2).all(|w| w[0] == w[1]) {
        (ranks[0], RankPath::MultiModular { primes })
    } else {
        (sparse_exact_rank(rows, cols), RankPath::Exact)
    }
}

/// Upper bound on the regularity of `m` generic lines in `P^n`:
/// `ceil((n!)^{1/(n-1)} (m^{1/(n-1)} - 1))`.
///
/// The ceiling is certified with integer `e`-th roots at increasing
/// precision until the enclosing interval has a single ceiling.
pub fn regularity_bound(m: u64, n: u64) -> Result<u64> {
    require_hh_range(m, n)?;
    if m == 1 {
        return Ok(0);
    }
    let e = (n - 1) as u32;
    let fact: BigUint = (1..=n).map(BigUint::from).product();
    let a = BigInt::from(&fact * m);
    let b = BigInt::from(fact);
    let mut prec = 64u64;
    loop {
        let shift = prec * e as u64;
        // floor(v^{1/e} 2^prec), so v^{1/e} 2^prec lies in [r, r + 1]
        let ra = (&a << shift).nth_root(e);
        let rb = (&b << shift).nth_root(e);
        let scale = BigInt::one() << prec;
        let lo: BigInt = &ra - &rb - 1;
        let hi: BigInt = &ra + 1 - &rb;
        let c_lo = lo.div_ceil(&scale);
        let c_hi = hi.div_ceil(&scale);
        if c_lo == c_hi {
            return c_lo.to_u64().ok_or_else(|| Error::OutOfRange("bound does not fit in u64".into()));
        }
        if prec > 1 << 16 {
            // an exact integer value would make the interval straddle forever
            return Err(Error::OutOfRange(format!("could not certify the ceiling for m = {m}, n = {n}")));
        }
        prec *= 2;
    }
}

/// Checks that the intersection of ideals generated by linear forms has
/// regularity at most the number of ideals, measuring the regularity of the
/// intersection from its Betti table.
pub fn derksen_sidman_check(ideals: &[Ideal]) -> Result<bool> {
    let Some(first) = ideals.first() else {
        return Err(Error::OutOfRange("need at least one ideal".into()));
    };
    for i in ideals {
        if let Some(g) = i.generators().iter().find(|g| !g.is_linear_form()) {
            return Err(Error::NonLinear(g.to_string()));
        }
    }
    let mut j = first.clone();
    for i in &ideals[1..] {
        j = crate::ideal_ops::intersect(&j, i)?;
    }
    let n = j.ambient_n();
    let bound = ideals.len() as u32;
    let table = crate::betti::graded_betti(&j, n + 1, n as u32 + 1 + bound + 1, false)?;
    // reg(J) = reg(S/J) + 1 for a proper nonzero ideal
    Ok(table.max_row() < bound)
}

/// Where a Hilbert profile came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HilbertSource {
    ClosedForm,
    InitialIdeal,
    LinearAlgebra,
}

/// Hilbert function values in degrees `0..values.len()`, optionally with the
/// series they expand from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertProfile {
    pub values: Vec<u64>,
    pub series: Option<RationalFunction1>,
    pub source: HilbertSource,
}

impl HilbertProfile {
    /// True when the series, if any, expands to the stored values.
    pub fn is_consistent(&self) -> bool {
        match &self.series {
            None => true,
            Some(s) => {
                self.values.is_empty() || s.series_expand(self.values.len() - 1).to_u64() == self.values
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert("values".into(), serde_json::json!(self.values));
        if let Some(s) = &self.series {
            obj.insert("series".into(), serde_json::Value::String(s.to_string()));
        }
        obj.insert("source".into(), serde_json::to_value(self.source).expect("enum serializes"));
        serde_json::Value::Object(obj)
    }
}

pub fn profile_closed_form(m: u64, n: u64, max_deg: u32) -> Result<HilbertProfile> {
    let values = (0..=max_deg as u64).map(|d| hh_hilbert(m, n, d)).collect::<Result<_>>()?;
    Ok(HilbertProfile {
        values,
        series: Some(hh_series(m, n)?),
        source: HilbertSource::ClosedForm,
    })
}

pub fn profile_gb(ideal: &Ideal, max_deg: u32) -> HilbertProfile {
    let series = hilbert_series_gb(ideal);
    HilbertProfile {
        values: series.series_expand(max_deg as usize).to_u64(),
        series: Some(series),
        source: HilbertSource::InitialIdeal,
    }
}

pub fn profile_linalg(ideal: &Ideal, max_deg: u32, exact: bool) -> Result<HilbertProfile> {
    let (values, _) = hilbert_values_linalg(ideal, max_deg, exact)?;
    Ok(HilbertProfile {
        values,
        series: None,
        source: HilbertSource::LinearAlgebra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[i64], d: u32) -> RationalFunction1 {
        RationalFunction1::from_i64(num, d)
    }

    #[test]
    fn hh_values() {
        assert_eq!(hh_hilbert(4, 3, 2).unwrap(), 10);
        assert_eq!(hh_hilbert(5, 6, 3).unwrap(), 20);
        for d in 0..6 {
            assert_eq!(hh_hilbert(1, 5, d).unwrap(), d + 1);
        }
        assert!(hh_hilbert(2, 2, 2).is_err());
    }

    #[test]
    fn points() {
        assert_eq!(points_hilbert(7, 2, 1).unwrap(), 3);
        assert_eq!(points_series(4, 3).unwrap(), rf(&[1, 3], 1));
        for d in 0..4 {
            assert_eq!(points_hilbert(1, 3, d).unwrap(), 1);
        }
    }

    #[test]
    fn closed_form_series() {
        assert_eq!(hh_series(5, 6).unwrap(), rf(&[1, 5, 2, -3], 2));
        assert_eq!(hh_series(1, 4).unwrap(), rf(&[1], 2));
        assert_eq!(hh_series(3, 4).unwrap(), rf(&[1, 3, 0, -1], 2));
        // regularity one: 2m <= n + 1
        assert_eq!(hh_series(3, 6).unwrap(), rf(&[1, 4, -2], 2));
    }

    #[test]
    fn alpha_values() {
        assert_eq!(regularity_alpha(1, 3).unwrap(), 0);
        assert_eq!(regularity_alpha(5, 6).unwrap(), 2);
        assert_eq!(regularity_alpha(3, 4).unwrap(), 2);
    }

    #[test]
    fn bound_values() {
        assert_eq!(regularity_bound(1, 5).unwrap(), 0);
        // sqrt(6) (sqrt(100) - 1) = 22.04...
        assert_eq!(regularity_bound(100, 3).unwrap(), 23);
        // sqrt(6) (sqrt(4) - 1) = 2.449...
        assert_eq!(regularity_bound(4, 3).unwrap(), 3);
        assert!(regularity_bound(5, 6).unwrap() >= 2);
    }

    #[test]
    fn k_polynomial_of_simple_ideals() {
        let x = |i| Monomial::var(i);
        // (x0 x1) in two variables: (1 - t^2) / (1 - t)^2
        let k = k_polynomial(&[x(0).mul(&x(1))], 2);
        assert_eq!(RationalFunction1::new(k, 2), rf(&[1, 1], 1));
        // (x0 x2, x0 x3, x1 x2, x1 x3): two skew lines in P^3
        let gens = [x(0).mul(&x(2)), x(0).mul(&x(3)), x(1).mul(&x(2)), x(1).mul(&x(3))];
        let k = k_polynomial(&gens, 4);
        let s = RationalFunction1::new(k, 4);
        assert_eq!(s.series_expand(4).to_u64(), vec![1, 4, 6, 8, 10]);
    }

    #[test]
    fn linalg_small() {
        let i = Ideal::parse(1, &["x0"]).unwrap();
        assert_eq!(hilbert_linalg(&i, 3, false).unwrap().0, 1);
        assert_eq!(hilbert_linalg(&i, 3, true).unwrap().0, 1);
    }
}
