//! Exact scalars and one-variable generating functions.
//!
//! Hilbert series of standard graded algebras are rational functions of the
//! form `p(t) / (1 - t)^d` with `p` an integer polynomial. This module keeps
//! them in exactly that shape, expands them into power series with
//! arbitrary-precision integer coefficients, and inverts them at `-t`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `numerator(t) / (1 - t)^denom_power`, kept with all common `(1 - t)`
/// factors cancelled.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction1 {
    numerator: Vec<BigInt>,
    denom_power: u32,
}

/// Maclaurin coefficients `c_0, ..., c_N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoefficientSequence(pub Vec<BigInt>);

fn trim(coeffs: &mut Vec<BigInt>) {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
}

/// Divides by `(1 - t)` when `p(1) = 0`.
fn divide_one_minus_t(p: &[BigInt]) -> Option<Vec<BigInt>> {
    let total: BigInt = p.iter().sum();
    if !total.is_zero() || p.is_empty() {
        return None;
    }
    // p = (1 - t) q  =>  q_i = p_0 + ... + p_i
    let mut q = Vec::with_capacity(p.len() - 1);
    let mut acc = BigInt::zero();
    for c in &p[..p.len() - 1] {
        acc += c;
        q.push(acc.clone());
    }
    trim(&mut q);
    Some(q)
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Coefficients of `(1 - t)^k`.
fn one_minus_t_pow(k: u32) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for _ in 0..k {
        out = poly_mul(&out, &[BigInt::one(), -BigInt::one()]);
    }
    out
}

/// Coefficients of `(1 + t)^k`.
fn one_plus_t_pow(k: u32) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for _ in 0..k {
        out = poly_mul(&out, &[BigInt::one(), BigInt::one()]);
    }
    out
}

impl RationalFunction1 {
    pub fn new(numerator: Vec<BigInt>, denom_power: u32) -> Self {
        let mut numerator = numerator;
        trim(&mut numerator);
        let mut denom_power = if numerator.is_empty() { 0 } else { denom_power };
        while denom_power > 0 {
            match divide_one_minus_t(&numerator) {
                Some(q) => {
                    numerator = q;
                    denom_power -= 1;
                }
                None => break,
            }
        }
        RationalFunction1 {
            numerator,
            denom_power,
        }
    }

    pub fn from_i64(numerator: &[i64], denom_power: u32) -> Self {
        Self::new(numerator.iter().map(|&c| BigInt::from(c)).collect(), denom_power)
    }

    pub fn zero() -> Self {
        Self::new(Vec::new(), 0)
    }

    /// Numerator coefficients, lowest degree first.
    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn denom_power(&self) -> u32 {
        self.denom_power
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    /// Rewrites over `(1 - t)^d` for `d >= denom_power`.
    fn numerator_over(&self, d: u32) -> Vec<BigInt> {
        poly_mul(&self.numerator, &one_minus_t_pow(d - self.denom_power))
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut num = vec![BigInt::zero(); k];
        num.extend(self.numerator.iter().cloned());
        Self::new(num, self.denom_power)
    }

    /// Divides by `t`; the constant coefficient of the series must vanish.
    pub fn unshift(&self) -> Option<Self> {
        match self.numerator.first() {
            None => Some(self.clone()),
            Some(c) if c.is_zero() => Some(Self::new(self.numerator[1..].to_vec(), self.denom_power)),
            Some(_) => None,
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.numerator.iter().map(|x| x * c).collect(), self.denom_power)
    }

    /// Maclaurin coefficients through degree `n`.
    pub fn series_expand(&self, n: usize) -> CoefficientSequence {
        let mut coeffs: Vec<BigInt> = (0..=n)
            .map(|i| self.numerator.get(i).cloned().unwrap_or_else(BigInt::zero))
            .collect();
        // 1 / (1 - t) is a running sum
        for _ in 0..self.denom_power {
            let mut acc = BigInt::zero();
            for c in coeffs.iter_mut() {
                acc += &*c;
                *c = acc.clone();
            }
        }
        CoefficientSequence(coeffs)
    }

    /// Builds the series whose coefficients agree with `values` and then
    /// equal `values.last()` forever after, i.e. a function that stabilises
    /// (denominator `1 - t`).
    pub fn from_eventually_constant(values: &[BigInt]) -> Self {
        let mut num: Vec<BigInt> = Vec::with_capacity(values.len());
        let mut prev = BigInt::zero();
        for v in values {
            num.push(v - &prev);
            prev = v.clone();
        }
        Self::new(num, 1)
    }
}

impl Add for &RationalFunction1 {
    type Output = RationalFunction1;
    fn add(self, rhs: &RationalFunction1) -> RationalFunction1 {
        let d = self.denom_power.max(rhs.denom_power);
        let a = self.numerator_over(d);
        let b = rhs.numerator_over(d);
        let len = a.len().max(b.len());
        let sum = (0..len)
            .map(|i| {
                a.get(i).cloned().unwrap_or_else(BigInt::zero)
                    + b.get(i).cloned().unwrap_or_else(BigInt::zero)
            })
            .collect();
        RationalFunction1::new(sum, d)
    }
}

impl Neg for &RationalFunction1 {
    type Output = RationalFunction1;
    fn neg(self) -> RationalFunction1 {
        RationalFunction1::new(self.numerator.iter().map(|c| -c).collect(), self.denom_power)
    }
}

impl Sub for &RationalFunction1 {
    type Output = RationalFunction1;
    fn sub(self, rhs: &RationalFunction1) -> RationalFunction1 {
        self + &(-rhs)
    }
}

/// Power-series inverse of the polynomial `p` (with `p(0) = 1`) through degree `n`.
fn inverse_series(p: &[BigInt], n: usize) -> Result<Vec<BigInt>> {
    match p.first() {
        Some(c) if c.is_one() => {}
        Some(c) => return Err(Error::ConstantTerm(c.to_string())),
        None => return Err(Error::ConstantTerm("0".into())),
    }
    let mut inv = vec![BigInt::zero(); n + 1];
    inv[0] = BigInt::one();
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for j in 1..=k.min(p.len() - 1) {
            acc += &p[j] * &inv[k - j];
        }
        inv[k] = -acc;
    }
    Ok(inv)
}

/// Coefficients of `1 / h(-t)` through degree `n`.
///
/// For a Koszul algebra with Hilbert series `h` this is the Poincaré series of
/// the residue field. Rejects `h` whose constant term is not 1.
pub fn reciprocal_series(h: &RationalFunction1, n: usize) -> Result<CoefficientSequence> {
    // 1 / h(-t) = (1 + t)^d / p(-t)
    let p_neg: Vec<BigInt> = h
        .numerator()
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
        .collect();
    let inv = inverse_series(&p_neg, n)?;
    let mut out = poly_mul(&inv, &one_plus_t_pow(h.denom_power()));
    out.resize(n + 1, BigInt::zero());
    Ok(CoefficientSequence(out))
}

impl CoefficientSequence {
    pub fn first_negative(&self) -> Option<usize> {
        first_negative(self)
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.0
    }

    pub fn to_u64(&self) -> Vec<u64> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|c| c.to_u64().expect("coefficient is not a u64")).collect()
    }

    pub fn to_i64(&self) -> Vec<i64> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|c| c.to_i64().expect("coefficient exceeds i64")).collect()
    }
}

pub fn first_negative(seq: &CoefficientSequence) -> Option<usize> {
    seq.0.iter().position(|c| c.is_negative())
}

impl fmt::Display for RationalFunction1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut body = String::new();
        for (i, c) in self.numerator.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if body.is_empty() {
                if neg {
                    body.push('-');
                }
            } else {
                body.push(if neg { '-' } else { '+' });
            }
            match i {
                0 => body.push_str(&mag.to_string()),
                _ => {
                    if !mag.is_one() {
                        body.push_str(&format!("{mag}*"));
                    }
                    body.push('t');
                    if i > 1 {
                        body.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        if body.is_empty() {
            body.push('0');
        }
        match self.denom_power {
            0 => write!(f, "({body})"),
            1 => write!(f, "({body})/(1-t)"),
            d => write!(f, "({body})/(1-t)^{d}"),
        }
    }
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    if s.starts_with('(') && s.ends_with(')') {
        // only strip when the outer pair matches
        let mut depth = 0i32;
        for (i, ch) in s.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 && i != s.len() - 1 {
                        return s;
                    }
                }
                _ => {}
            }
        }
        return &s[1..s.len() - 1];
    }
    s
}

fn parse_t_polynomial(src: &str) -> Result<Vec<BigInt>> {
    let text: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(Error::parse(src, "empty numerator"));
    }
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut start = 0;
    let bytes = text.as_bytes();
    let mut terms = Vec::new();
    for i in 1..=bytes.len() {
        if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^') {
            terms.push(&text[start..i]);
            start = i;
        }
    }
    for term in terms {
        let (sign, body) = match term.as_bytes()[0] {
            b'-' => (-1, &term[1..]),
            b'+' => (1, &term[1..]),
            _ => (1, term),
        };
        let (coef, power) = match body.find('t') {
            None => (body, 0usize),
            Some(pos) => {
                let coef = body[..pos].trim_end_matches('*');
                let rest = &body[pos + 1..];
                let power = if rest.is_empty() {
                    1
                } else if let Some(p) = rest.strip_prefix('^') {
                    p.parse::<usize>().map_err(|_| Error::parse(term, "bad exponent"))?
                } else {
                    return Err(Error::parse(term, "unexpected text after t"));
                };
                (coef, power)
            }
        };
        let value = if coef.is_empty() {
            BigInt::one()
        } else {
            BigInt::from_str(coef).map_err(|_| Error::parse(term, "bad integer coefficient"))?
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigInt::zero());
        }
        coeffs[power] += value * sign;
    }
    Ok(coeffs)
}

impl FromStr for RationalFunction1 {
    type Err = Error;

    /// Accepts `"(-3*t^3+2*t^2+5*t+1)/(1-t)^2"`, `"1/(1-t)"`, `"1+t"`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (num, den) = match compact.rfind("/(1-t)") {
            Some(pos) => (&compact[..pos], &compact[pos + "/(1-t)".len()..]),
            None => (compact.as_str(), ""),
        };
        let power = if num.len() == compact.len() {
            0
        } else if den.is_empty() {
            1
        } else if let Some(p) = den.strip_prefix('^') {
            p.parse::<u32>().map_err(|_| Error::parse(den, "bad denominator exponent"))?
        } else {
            return Err(Error::parse(den, "denominator must be (1-t)^d"));
        };
        Ok(Self::new(parse_t_polynomial(strip_parens(num))?, power))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[i64]) -> CoefficientSequence {
        CoefficientSequence(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn geometric_series() {
        let f = RationalFunction1::from_i64(&[1], 1);
        assert_eq!(f.series_expand(3), seq(&[1, 1, 1, 1]));
    }

    #[test]
    fn polynomial_series() {
        let f = RationalFunction1::from_i64(&[1, 1], 0);
        assert_eq!(f.series_expand(3), seq(&[1, 1, 0, 0]));
    }

    #[test]
    fn five_lines_in_p6_series() {
        let f: RationalFunction1 = "(-3*t^3+2*t^2+5*t+1)/(1-t)^2".parse().unwrap();
        assert_eq!(f.series_expand(3), seq(&[1, 7, 15, 20]));
    }

    #[test]
    fn normalization_cancels_one_minus_t() {
        let f = RationalFunction1::from_i64(&[1, 2, 3], 2);
        let g = RationalFunction1::new(
            super::poly_mul(f.numerator(), &[BigInt::one(), -BigInt::one()]),
            3,
        );
        assert_eq!(f, g);
        // (1 - t^2)/(1 - t) = 1 + t
        let h = RationalFunction1::from_i64(&[1, 0, -1], 1);
        assert_eq!(h, RationalFunction1::from_i64(&[1, 1], 0));
    }

    #[test]
    fn reciprocal_of_field_is_one() {
        let one = RationalFunction1::from_i64(&[1], 0);
        assert_eq!(reciprocal_series(&one, 3).unwrap(), seq(&[1, 0, 0, 0]));
    }

    #[test]
    fn reciprocal_for_six_lines_in_p6() {
        // reg 2 numerator with m = 6, n = 6
        let h = RationalFunction1::from_i64(&[1, 5, 5, -5], 2);
        let p = reciprocal_series(&h, 4).unwrap();
        assert_eq!(p, seq(&[1, 7, 31, 115, 385]));
    }

    #[test]
    fn reciprocal_rejects_bad_constant() {
        let h = RationalFunction1::from_i64(&[2, 1], 1);
        assert!(matches!(reciprocal_series(&h, 3), Err(Error::ConstantTerm(_))));
    }

    #[test]
    fn first_negative_index() {
        assert_eq!(first_negative(&seq(&[1, 1, 1])), None);
        assert_eq!(first_negative(&seq(&[1, 0, -2])), Some(2));
    }

    #[test]
    fn display_and_parse() {
        let f = RationalFunction1::from_i64(&[1, 5, 2, -3], 2);
        assert_eq!(f.to_string(), "(-3*t^3+2*t^2+5*t+1)/(1-t)^2");
        assert_eq!(f.to_string().parse::<RationalFunction1>().unwrap(), f);
        assert_eq!("1/(1-t)".parse::<RationalFunction1>().unwrap(), RationalFunction1::from_i64(&[1], 1));
        assert_eq!("1+t".parse::<RationalFunction1>().unwrap().to_string(), "(t+1)");
        assert!("(1+t)/(1+t)".parse::<RationalFunction1>().is_err());
    }

    #[test]
    fn arithmetic() {
        let a = RationalFunction1::from_i64(&[1], 2);
        let b = RationalFunction1::from_i64(&[1], 1);
        let one = RationalFunction1::from_i64(&[1], 0);
        // 1/(1-t)^2 + 1/(1-t) - 1 = (-t^2+t+1)/(1-t)^2
        let s = &(&a + &b) - &one;
        assert_eq!(s, RationalFunction1::from_i64(&[1, 1, -1], 2));
        assert_eq!(s.shift(1).unshift().unwrap(), s);
    }
}
