use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::{monomials_in, Monomial, MAX_VARS};
use super::order::MonomialOrder;

/// A polynomial over the rationals in `nvars` variables; terms are kept
/// strictly decreasing under `order` with nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    order: MonomialOrder,
    terms: Vec<(Monomial, BigRational)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Polynomial {
            nvars,
            order: MonomialOrder::Grevlex,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_terms(nvars, MonomialOrder::Grevlex, vec![(Monomial::one(), c)])
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable x{i} outside {nvars} variables");
        Self::from_terms(nvars, MonomialOrder::Grevlex, vec![(Monomial::var(i), BigRational::one())])
    }

    pub fn monomial(nvars: usize, m: Monomial) -> Self {
        Self::from_terms(nvars, MonomialOrder::Grevlex, vec![(m, BigRational::one())])
    }

    /// The linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[BigRational]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial::var(i), c.clone()))
            .collect();
        Self::from_terms(coeffs.len(), MonomialOrder::Grevlex, terms)
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(nvars: usize, order: MonomialOrder, mut terms: Vec<(Monomial, BigRational)>) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        debug_assert!(terms.iter().all(|(m, _)| m.last_var().is_none_or(|v| v < nvars)));
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, BigRational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => {
                    if out.last().is_some_and(|(_, c)| c.is_zero()) {
                        out.pop();
                    }
                    out.push((m, c));
                }
            }
        }
        if out.last().is_some_and(|(_, c)| c.is_zero()) {
            out.pop();
        }
        Polynomial { nvars, order, terms: out }
    }

    /// Trusts that `terms` are already sorted, distinct and nonzero.
    pub(crate) fn from_sorted(nvars: usize, order: MonomialOrder, terms: Vec<(Monomial, BigRational)>) -> Self {
        Polynomial { nvars, order, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, BigRational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.degree() == 0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|(m, _)| *m)
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self.terms.iter().all(|(m, _)| m.degree() == m0.degree()),
        }
    }

    pub fn is_linear_form(&self) -> bool {
        !self.is_zero() && self.terms.iter().all(|(m, _)| m.degree() == 1)
    }

    /// Coefficient vector of a linear form.
    pub fn linear_coefficients(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.nvars];
        for (m, c) in &self.terms {
            debug_assert_eq!(m.degree(), 1);
            out[m.last_var().expect("linear term")] = c.clone();
        }
        out
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        if order == self.order {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial {
            nvars: self.nvars,
            order,
            terms,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Polynomial {
                terms: Vec::new(),
                ..self.clone()
            };
        }
        Polynomial {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.recip()),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> Self {
        if c.is_zero() {
            return Polynomial {
                terms: Vec::new(),
                ..self.clone()
            };
        }
        // multiplication by a monomial preserves the order of terms
        Polynomial {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(t, x)| (t.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars).with_order(self.order);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Embeds into a ring with `nvars` variables (at least the current count).
    pub fn embed(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars && nvars <= MAX_VARS);
        Polynomial {
            nvars,
            ..self.clone()
        }
    }

    /// Prepends `k` fresh variables, renaming `x_i` to `x_{i+k}`.
    pub fn shifted(&self, k: usize, order: MonomialOrder) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.shifted(k), c.clone())).collect();
        Self::from_terms(self.nvars + k, order, terms)
    }

    /// Inverse of [`shifted`](Self::shifted); the first `k` variables must not occur.
    pub fn unshifted(&self, k: usize, order: MonomialOrder) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert!((0..k).all(|i| m.exp(i) == 0));
                (m.unshifted(k), c.clone())
            })
            .collect();
        Self::from_terms(self.nvars - k, order, terms)
    }

    pub fn involves_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(i) > 0)
    }

    /// Renames `x_i` to `x_{perm[i]}`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.permuted(perm), c.clone())).collect();
        Self::from_terms(self.nvars, self.order, terms)
    }

    /// Substitutes `images[i]` for `x_i`.
    pub fn substitute(&self, images: &[Polynomial]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let target_vars = images.first().map_or(self.nvars, |p| p.nvars);
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Self::one(target_vars).with_order(self.order), p.with_order(self.order)])
            .collect();
        let mut acc = Self::zero(target_vars).with_order(self.order);
        for (m, c) in &self.terms {
            let mut term = Self::constant(target_vars, c.clone()).with_order(self.order);
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = m.exp(i) as usize;
                while pw.len() <= e {
                    let next = &pw[pw.len() - 1] * &pw[1];
                    pw.push(next);
                }
                if e > 0 {
                    term = &term * &pw[e];
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, x) in point.iter().enumerate().take(self.nvars) {
                for _ in 0..m.exp(i) {
                    v *= x;
                }
            }
            acc += v;
        }
        acc
    }

    /// Homogeneous component of degree `d`.
    pub fn component(&self, d: u32) -> Self {
        Polynomial {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect(),
        }
    }

    /// Exact division by a monomial dividing every term.
    pub fn div_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| {
                    assert!(m.divides(t), "monomial does not divide every term");
                    (m.quotient(t), c.clone())
                })
                .collect(),
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "ambient mismatch");
        assert_eq!(self.order, other.order, "order mismatch");
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        self.check_compatible(other);
        let order = self.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                order.cmp(&a[i].0, &b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial {
            nvars: self.nvars,
            order,
            terms: out,
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, true)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_compatible(rhs);
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                terms.push((m1.mul(m2), c1 * c2));
            }
        }
        Polynomial::from_terms(self.nvars, self.order, terms)
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            if m.degree() == 0 {
                f.write_str(&fmt_rational(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", fmt_rational(&mag))?;
                }
                m.fmt_vars(f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All monomials of degree `d` in `x_0..x_n`, sorted decreasingly by `order`.
pub fn monomials_of_degree_in_order(n: usize, d: u32, order: MonomialOrder) -> Vec<Monomial> {
    let mut out = monomials_in(n + 1, d);
    out.sort_by(|a, b| order.cmp(b, a));
    out
}

/// All monomials of degree `d` in `x_0..x_n`, decreasing in grevlex.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    monomials_of_degree_in_order(n, d, MonomialOrder::Grevlex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn x(i: usize) -> Polynomial {
        Polynomial::var(3, i)
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x(0) + &x(1)) * &(&x(0) - &x(1));
        assert_eq!(p.to_string(), "x0^2 - x1^2");
    }

    #[test]
    fn leading_term_under_grevlex_and_lex() {
        let p = &(&x(0) * &x(2)) + &(&x(1) * &x(1));
        assert_eq!(p.leading_monomial().unwrap().to_string(), "x1^2");
        assert_eq!(p.with_order(MonomialOrder::Lex).leading_monomial().unwrap().to_string(), "x0*x2");
    }

    #[test]
    fn printing() {
        let p = Polynomial::from_terms(
            4,
            MonomialOrder::Grevlex,
            vec![
                (Monomial::from_exponents(&[2, 0, 0, 1]), q(1, 2)),
                (Monomial::from_exponents(&[0, 1, 1, 0]), q(-1, 1)),
            ],
        );
        assert_eq!(p.to_string(), "1/2*x0^2*x3 - x1*x2");
        assert_eq!((-&p).to_string(), "-1/2*x0^2*x3 + x1*x2");
        assert_eq!(Polynomial::constant(2, q(-3, 4)).to_string(), "-3/4");
        assert_eq!(Polynomial::zero(2).to_string(), "0");
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(1, 2).len(), 3);
        assert_eq!(monomials_of_degree(4, 1).len(), 5);
        assert_eq!(monomials_of_degree(6, 2).len(), 28);
        let m = monomials_of_degree(1, 2);
        assert_eq!(format!("{m:?}"), "[x0^2, x0*x1, x1^2]");
    }

    #[test]
    fn substitution() {
        // x0*x1 with x0 -> x0 + x1, x1 -> x0 - x1
        let p = &x(0) * &x(1);
        let images = vec![&x(0) + &x(1), &x(0) - &x(1), x(2)];
        assert_eq!(p.substitute(&images).to_string(), "x0^2 - x1^2");
    }

    #[test]
    fn evaluation() {
        let p = &(&x(0) * &x(1)) + &x(2);
        assert_eq!(p.evaluate(&[q(2, 1), q(3, 1), q(1, 2)]), q(13, 2));
    }
}
