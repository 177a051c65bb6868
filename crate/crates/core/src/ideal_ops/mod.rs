//! Ideals of the polynomial ring and the operations built on Gröbner bases:
//! membership, equality, sums, intersections, colons, initial ideals and
//! minimal generator counts.

mod groebner;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multipoly::linalg::{multimodular_rank, RankPath};
use crate::multipoly::{monomials_of_degree, parse_polynomial, Monomial, MonomialOrder, Polynomial};

/// An ideal of `Q[x0..xn]` given by generators. The grevlex basis is
/// computed on first use and kept.
#[derive(Clone, Debug)]
pub struct Ideal {
    nvars: usize,
    generators: Vec<Polynomial>,
    basis: OnceLock<Arc<GroebnerBasis>>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.generators == other.generators
    }
}

impl Eq for Ideal {}

/// A reduced Gröbner basis: monic, no term of an element divisible by the
/// leading monomial of another, sorted increasingly by leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    order: MonomialOrder,
    elements: Vec<Polynomial>,
}

#[derive(Serialize, Deserialize)]
struct IdealJson {
    n: usize,
    generators: Vec<String>,
}

impl Ideal {
    /// Ideal of `Q[x0..xn]`; zero generators are dropped.
    pub fn new(n: usize, generators: Vec<Polynomial>) -> Result<Self> {
        let nvars = n + 1;
        for g in &generators {
            if g.nvars() != nvars {
                return Err(Error::Ambient {
                    expected: nvars,
                    found: g.nvars(),
                });
            }
        }
        Ok(Ideal {
            nvars,
            generators: generators
                .into_iter()
                .filter(|g| !g.is_zero())
                .map(|g| g.with_order(MonomialOrder::Grevlex))
                .collect(),
            basis: OnceLock::new(),
        })
    }

    pub fn zero(n: usize) -> Self {
        Ideal {
            nvars: n + 1,
            generators: Vec::new(),
            basis: OnceLock::new(),
        }
    }

    pub fn unit(n: usize) -> Self {
        Ideal {
            nvars: n + 1,
            generators: vec![Polynomial::one(n + 1)],
            basis: OnceLock::new(),
        }
    }

    /// The irrelevant maximal ideal `(x0, ..., xn)`.
    pub fn maximal(n: usize) -> Self {
        Ideal {
            nvars: n + 1,
            generators: (0..=n).map(|i| Polynomial::var(n + 1, i)).collect(),
            basis: OnceLock::new(),
        }
    }

    pub fn parse(n: usize, generators: &[&str]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|s| parse_polynomial(s, n + 1))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, gens)
    }

    /// `n` for an ideal of `Q[x0..xn]`.
    pub fn ambient_n(&self) -> usize {
        self.nvars - 1
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(|g| g.is_homogeneous())
    }

    pub fn require_homogeneous(&self) -> Result<()> {
        match self.generators.iter().find(|g| !g.is_homogeneous()) {
            Some(g) => Err(Error::NotHomogeneous(g.to_string())),
            None => Ok(()),
        }
    }

    fn check_ambient(&self, other: &Ideal) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Ambient {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn groebner(&self) -> GroebnerBasis {
        (*self.groebner_shared()).clone()
    }

    pub fn groebner_shared(&self) -> Arc<GroebnerBasis> {
        self.basis
            .get_or_init(|| Arc::new(buchberger(self, MonomialOrder::Grevlex)))
            .clone()
    }

    /// The same ideal with other generators; the caller vouches that they
    /// generate it, so a computed basis is carried over.
    pub fn regenerated(&self, generators: Vec<Polynomial>) -> Result<Ideal> {
        let out = Ideal::new(self.ambient_n(), generators)?;
        if let Some(b) = self.basis.get() {
            let _ = out.basis.set(b.clone());
        }
        Ok(out)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ambient(other)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ok(Ideal {
            nvars: self.nvars,
            generators: gens,
            basis: OnceLock::new(),
        })
    }

    /// `self + (extra)`.
    pub fn with(&self, extra: &[Polynomial]) -> Result<Ideal> {
        self.sum(&Ideal::new(self.ambient_n(), extra.to_vec())?)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.groebner_shared().contains(f)
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        let gb = other.groebner_shared();
        self.generators.iter().all(|g| gb.contains(g))
    }

    /// Equality of ideals, decided by comparing reduced Gröbner bases.
    pub fn equals(&self, other: &Ideal) -> bool {
        self.nvars == other.nvars && self.groebner_shared() == other.groebner_shared()
    }

    /// Generators sorted by degree, then by leading monomial, then textually.
    pub fn canonical_generators(&self) -> Vec<Polynomial> {
        let mut gens = self.generators.clone();
        gens.sort_by(|a, b| {
            let (la, lb) = (a.leading_monomial(), b.leading_monomial());
            a.degree()
                .cmp(&b.degree())
                .then_with(|| match (la, lb) {
                    (Some(x), Some(y)) => MonomialOrder::Grevlex.cmp(&y, &x),
                    _ => std::cmp::Ordering::Equal,
                })
                .then_with(|| a.to_string().cmp(&b.to_string()))
        });
        gens
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(IdealJson {
            n: self.ambient_n(),
            generators: self.canonical_generators().iter().map(|g| g.to_string()).collect(),
        })
        .expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Ideal> {
        let raw: IdealJson = serde_json::from_value(value.clone())?;
        let gens: Vec<&str> = raw.generators.iter().map(String::as_str).collect();
        Ideal::parse(raw.n, &gens)
    }

    /// A minimal homogeneous generating set, found degree by degree.
    pub fn minimalize(&self) -> Result<Ideal> {
        self.require_homogeneous()?;
        let mut gens: Vec<Polynomial> = self.generators.clone();
        gens.sort_by_key(|g| g.degree());
        let mut kept: Vec<Polynomial> = Vec::new();
        let mut gb: Option<GroebnerBasis> = None;
        let mut gb_degree = 0;
        for g in gens {
            let d = g.degree().unwrap_or(0);
            if gb.is_none() || gb_degree != d {
                let basis = groebner::groebner(&kept, self.nvars, MonomialOrder::Grevlex, Some(d));
                gb = Some(GroebnerBasis {
                    nvars: self.nvars,
                    order: MonomialOrder::Grevlex,
                    elements: basis,
                });
                gb_degree = d;
            }
            let basis = gb.as_mut().expect("basis");
            let r = basis.normal_form(&g);
            if !r.is_zero() {
                kept.push(g);
                basis.elements = groebner::groebner(&kept, self.nvars, MonomialOrder::Grevlex, Some(d));
            }
        }
        self.regenerated(kept)
    }
}

/// Reduced Gröbner basis of `ideal` under `order`.
pub fn buchberger(ideal: &Ideal, order: MonomialOrder) -> GroebnerBasis {
    GroebnerBasis {
        nvars: ideal.nvars,
        order,
        elements: groebner::groebner(&ideal.generators, ideal.nvars, order, None),
    }
}

impl GroebnerBasis {
    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().filter_map(|p| p.leading_monomial()).collect()
    }

    /// Remainder of `f` on division by the basis; zero iff `f` is in the ideal.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        normal_form(f, self)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Is `m` outside the initial ideal?
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.elements.iter().any(|g| g.leading_monomial().is_some_and(|l| l.divides(m)))
    }

    pub fn to_ideal(&self) -> Ideal {
        let out = Ideal {
            nvars: self.nvars,
            generators: self.elements.iter().map(|g| g.with_order(MonomialOrder::Grevlex)).collect(),
            basis: OnceLock::new(),
        };
        if self.order == MonomialOrder::Grevlex {
            let _ = out.basis.set(Arc::new(self.clone()));
        }
        out
    }
}

/// Full reduction of `f` by a reduced Gröbner basis over the rationals.
pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Polynomial {
    assert_eq!(f.nvars(), gb.nvars, "ambient mismatch");
    let order = gb.order;
    let mut rest = f.with_order(order);
    let mut done: Vec<(Monomial, BigRational)> = Vec::new();
    while let Some((m, c)) = rest.leading_term().map(|(m, c)| (*m, c.clone())) {
        match gb.elements.iter().find(|g| g.leading_monomial().is_some_and(|l| l.divides(&m))) {
            Some(g) => {
                let shift = g.leading_monomial().expect("nonzero").quotient(&m);
                rest = &rest - &g.mul_term(&shift, &c);
            }
            None => {
                done.push((m, c));
                let terms = rest.into_terms().into_iter().skip(1).collect();
                rest = Polynomial::from_sorted(f.nvars(), order, terms);
            }
        }
    }
    Polynomial::from_sorted(f.nvars(), order, done).with_order(f.order())
}

/// `I ∩ J`, by eliminating `t` from `t·I + (1 - t)·J`.
pub fn intersect(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    i.check_ambient(j)?;
    let n = i.ambient_n();
    if i.generators.is_empty() || j.generators.is_empty() {
        return Ok(Ideal::zero(n));
    }
    let order = MonomialOrder::Elimination(1);
    let big = i.nvars + 1;
    let t = Polynomial::var(big, 0).with_order(order);
    let one_minus_t = &Polynomial::one(big).with_order(order) - &t;
    let mut gens = Vec::new();
    for g in &i.generators {
        gens.push(&g.shifted(1, order) * &t);
    }
    for g in &j.generators {
        gens.push(&g.shifted(1, order) * &one_minus_t);
    }
    let basis = groebner::groebner(&gens, big, order, None);
    // the t-free part of a reduced elimination basis is the reduced grevlex
    // basis of the intersection
    let kept: Vec<Polynomial> = basis
        .into_iter()
        .filter(|p| !p.involves_var(0))
        .map(|p| p.unshifted(1, MonomialOrder::Grevlex))
        .collect();
    let mut elements = kept.clone();
    elements.sort_by(|a, b| {
        MonomialOrder::Grevlex.cmp(&a.leading_monomial().expect("nonzero"), &b.leading_monomial().expect("nonzero"))
    });
    let out = Ideal::new(n, kept)?;
    let _ = out.basis.set(Arc::new(GroebnerBasis {
        nvars: i.nvars,
        order: MonomialOrder::Grevlex,
        elements,
    }));
    Ok(out)
}

/// Exact quotient `f / g` by multivariate division; `None` if `g` does not divide `f`.
pub fn exact_division(f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
    let order = f.order();
    let g = g.with_order(order);
    let (lg, cg) = g.leading_term().map(|(m, c)| (*m, c.clone()))?;
    let mut rest = f.clone();
    let mut quotient = Vec::new();
    while let Some((m, c)) = rest.leading_term().map(|(m, c)| (*m, c.clone())) {
        if !lg.divides(&m) {
            return None;
        }
        let q = lg.quotient(&m);
        let coeff = &c / &cg;
        rest = &rest - &g.mul_term(&q, &coeff);
        quotient.push((q, coeff));
    }
    Some(Polynomial::from_terms(f.nvars(), order, quotient))
}

/// `I : (f)` via `(I ∩ (f)) / f`.
pub fn colon_by_intersection(i: &Ideal, f: &Polynomial) -> Result<Ideal> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    let principal = Ideal::new(i.ambient_n(), vec![f.clone()])?;
    let meet = intersect(i, &principal)?;
    let gens = meet
        .generators
        .iter()
        .map(|g| exact_division(g, f).expect("generators of I ∩ (f) are multiples of f"))
        .collect();
    Ideal::new(i.ambient_n(), gens)
}

/// `I : (ℓ)` for homogeneous `I` and a linear form `ℓ`: after a change of
/// coordinates making `ℓ` the last variable, the grevlex basis of the colon
/// is the basis of `I` with one factor of the last variable divided out
/// wherever it occurs.
fn colon_by_linear_form(i: &Ideal, l: &Polynomial) -> Result<Ideal> {
    let nvars = i.nvars;
    let last = nvars - 1;
    let coeffs = l.linear_coefficients();
    let v = (0..nvars).rev().find(|&k| !coeffs[k].is_zero()).expect("nonzero form");
    let x = |k: usize| Polynomial::var(nvars, k);
    // forward: y = A x with y_last = ℓ and y_v = x_last (when v != last)
    let mut forward: Vec<Polynomial> = (0..nvars).map(x).collect();
    forward[last] = l.with_order(MonomialOrder::Grevlex);
    if v != last {
        forward[v] = x(last);
    }
    // backward: x = A^{-1} y
    let mut backward: Vec<Polynomial> = (0..nvars).map(x).collect();
    if v != last {
        backward[last] = x(v);
    }
    let mut xv = x(last);
    for (k, c) in coeffs.iter().enumerate() {
        if k != v && !c.is_zero() {
            xv = &xv - &backward[k].scale(c);
        }
    }
    backward[v] = xv.scale(&coeffs[v].recip());

    let moved: Vec<Polynomial> = i.generators.iter().map(|g| g.substitute(&backward)).collect();
    let basis = groebner::groebner(&moved, nvars, MonomialOrder::Grevlex, None);
    let divided: Vec<Polynomial> = basis
        .into_iter()
        .map(|g| match g.leading_monomial().and_then(|m| m.checked_div_var(last)) {
            Some(_) => g.div_monomial(&Monomial::var(last)),
            None => g,
        })
        .collect();
    let back: Vec<Polynomial> = divided.iter().map(|g| g.substitute(&forward)).collect();
    Ideal::new(i.ambient_n(), back)
}

/// The ideal quotient `I : (f)`.
pub fn colon(i: &Ideal, f: &Polynomial) -> Result<Ideal> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if f.nvars() != i.nvars {
        return Err(Error::Ambient {
            expected: i.nvars,
            found: f.nvars(),
        });
    }
    if f.is_constant() {
        return Ok(i.clone());
    }
    if f.is_linear_form() && i.is_homogeneous() {
        return colon_by_linear_form(i, f);
    }
    colon_by_intersection(i, f)
}

/// `I : J`, the intersection of `I : g` over generators `g` of `J`.
pub fn colon_ideal(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    i.check_ambient(j)?;
    let gb = i.groebner();
    let mut acc: Option<Ideal> = None;
    for g in &j.generators {
        if gb.contains(g) {
            continue;
        }
        let c = colon(i, g)?;
        acc = Some(match acc {
            None => c,
            Some(a) => intersect(&a, &c)?,
        });
    }
    Ok(acc.unwrap_or_else(|| Ideal::unit(i.ambient_n())))
}

/// Ideal of leading monomials of a basis.
pub fn initial_ideal(gb: &GroebnerBasis) -> Ideal {
    Ideal {
        nvars: gb.nvars,
        generators: gb.leading_monomials().into_iter().map(|m| Polynomial::monomial(gb.nvars, m)).collect(),
        basis: OnceLock::new(),
    }
}

/// Basis of `I_d` with pairwise distinct leading monomials, one per monomial
/// of the initial ideal in degree `d`.
pub fn graded_piece_basis(gb: &GroebnerBasis, d: u32) -> Vec<Polynomial> {
    let n = gb.nvars - 1;
    monomials_of_degree(n, d)
        .into_iter()
        .filter_map(|m| {
            gb.elements
                .iter()
                .find(|g| g.leading_monomial().is_some_and(|l| l.divides(&m) && g.is_homogeneous()))
                .map(|g| {
                    let shift = g.leading_monomial().expect("nonzero").quotient(&m);
                    g.mul_term(&shift, &BigRational::one())
                })
        })
        .collect()
}

/// Counts of minimal generators per degree `j <= max_deg`, as
/// `dim I_j - dim (S_1 · I_{j-1})`, plus the rank path that produced them.
pub fn minimal_generators_up_to(ideal: &Ideal, max_deg: u32) -> Result<(BTreeMap<u32, usize>, Vec<RankPath>)> {
    ideal.require_homogeneous()?;
    let gb = ideal.groebner();
    let n = ideal.ambient_n();
    let mut out = BTreeMap::new();
    let mut paths = Vec::new();
    let mut prev: Vec<Polynomial> = Vec::new();
    for j in 0..=max_deg {
        let basis = graded_piece_basis(&gb, j);
        let monos = monomials_of_degree(n, j);
        let index: std::collections::HashMap<Monomial, usize> = monos.iter().enumerate().map(|(k, m)| (*m, k)).collect();
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for b in &prev {
            for v in 0..=n {
                let p = b.mul_term(&Monomial::var(v), &BigRational::one());
                let mut row = vec![BigRational::zero(); monos.len()];
                for (m, c) in p.terms() {
                    row[index[m]] = c.clone();
                }
                rows.push(row);
            }
        }
        let (r, path) = if rows.is_empty() {
            (0, RankPath::Exact)
        } else {
            multimodular_rank(&rows, monos.len())
        };
        paths.push(path);
        let count = basis.len() - r;
        if count > 0 {
            out.insert(j, count);
        }
        prev = basis;
    }
    Ok((out, paths))
}

/// Integer helper for tests and callers building forms from integer data.
pub fn linear_form(coeffs: &[i64]) -> Polynomial {
    Polynomial::linear(&coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(n: usize, gens: &[&str]) -> Ideal {
        Ideal::parse(n, gens).unwrap()
    }

    fn p(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, n + 1).unwrap()
    }

    #[test]
    fn disjoint_monomial_intersection() {
        let i = intersect(&ideal(3, &["x0", "x1"]), &ideal(3, &["x2", "x3"])).unwrap();
        assert!(i.equals(&ideal(3, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"])));
    }

    #[test]
    fn colon_examples() {
        let i = ideal(2, &["x0*x1"]);
        assert!(colon(&i, &p("x0", 2)).unwrap().equals(&ideal(2, &["x1"])));
        assert!(colon(&i, &p("1", 2)).unwrap().equals(&i));
        assert!(matches!(colon(&i, &Polynomial::zero(3)), Err(Error::ZeroDivisor)));
    }

    #[test]
    fn linear_colon_matches_intersection_route() {
        let i = ideal(3, &["x0*x1 - x2^2", "x1*x3 + x0*x2", "x3^3"]);
        for l in ["x0 + x3", "x1 - 2*x2", "x3", "x0"] {
            let f = p(l, 3);
            let a = colon_by_linear_form(&i, &f).unwrap();
            let b = colon_by_intersection(&i, &f).unwrap();
            assert!(a.equals(&b), "colon by {l}");
        }
    }

    #[test]
    fn normal_form_basics() {
        let i = ideal(2, &["x0^2 - x1*x2", "x1^2"]);
        let gb = i.groebner();
        for g in i.generators() {
            assert!(gb.normal_form(g).is_zero());
        }
        assert_eq!(gb.normal_form(&p("1", 2)).to_string(), "1");
    }

    #[test]
    fn minimal_generators_of_linear_ideal() {
        let (counts, _) = minimal_generators_up_to(&ideal(3, &["x0", "x1"]), 3).unwrap();
        assert_eq!(counts, BTreeMap::from([(1, 2)]));
    }

    #[test]
    fn minimalize_drops_redundant() {
        let i = ideal(2, &["x0", "x0*x1", "x1^2", "x0 + x1^0*x0"]).minimalize().unwrap();
        assert_eq!(i.generators().len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let i = ideal(2, &["x1^2", "x0"]);
        let j = Ideal::from_json(&i.to_json()).unwrap();
        assert_eq!(j.to_json().to_string(), r#"{"n":2,"generators":["x0","x1^2"]}"#);
    }
}
