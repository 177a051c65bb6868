//! Buchberger's algorithm with the Gebauer–Möller pair criteria and sugar
//! selection.
//!
//! Internally every polynomial is kept primitive over the integers, which
//! avoids a gcd per coefficient operation; results are returned monic over
//! the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::multipoly::{Monomial, MonomialOrder, Polynomial};

type Terms = Vec<(Monomial, BigInt)>;

#[derive(Clone, Debug)]
pub(crate) struct IPoly {
    pub terms: Terms,
    pub sugar: u32,
}

impl IPoly {
    fn lm(&self) -> Monomial {
        self.terms[0].0
    }
}

fn content(terms: &Terms) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in terms {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divides by the content and makes the leading coefficient positive.
fn make_primitive(terms: &mut Terms) {
    if terms.is_empty() {
        return;
    }
    let mut g = content(terms);
    if terms[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, c) in terms.iter_mut() {
            *c = &*c / &g;
        }
    }
}

pub(crate) fn to_ipoly(p: &Polynomial, order: MonomialOrder) -> IPoly {
    let p = p.with_order(order);
    let l = p
        .terms()
        .iter()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut terms: Terms = p
        .terms()
        .iter()
        .map(|(m, c)| (*m, c.numer() * (&l / c.denom())))
        .collect();
    make_primitive(&mut terms);
    let sugar = terms.iter().map(|(m, _)| order.sugar_degree(m)).max().unwrap_or(0);
    IPoly { terms, sugar }
}

pub(crate) fn to_monic(p: &IPoly, nvars: usize, order: MonomialOrder) -> Polynomial {
    let lc = p.terms[0].1.clone();
    let terms = p
        .terms
        .iter()
        .map(|(m, c)| (*m, BigRational::new(c.clone(), lc.clone())))
        .collect();
    Polynomial::from_sorted(nvars, order, terms)
}

/// `a * f - b * (m * g)`, where the leading terms cancel.
fn combine(f: &[(Monomial, BigInt)], a: &BigInt, b: &BigInt, m: &Monomial, g: &[(Monomial, BigInt)], order: MonomialOrder) -> Terms {
    use std::cmp::Ordering;
    let mut out = Vec::with_capacity(f.len() + g.len());
    let (mut i, mut j) = (0, 0);
    while i < f.len() || j < g.len() {
        let gm = if j < g.len() { Some(g[j].0.mul(m)) } else { None };
        let ord = match (i < f.len(), &gm) {
            (true, Some(gm)) => order.cmp(&f[i].0, gm),
            (true, None) => Ordering::Greater,
            (false, _) => Ordering::Less,
        };
        match ord {
            Ordering::Greater => {
                out.push((f[i].0, a * &f[i].1));
                i += 1;
            }
            Ordering::Less => {
                out.push((gm.expect("term"), -(b * &g[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = a * &f[i].1 - b * &g[j].1;
                if !c.is_zero() {
                    out.push((f[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Fully reduces `f` modulo `basis` (leading monomials in `lms`). The result
/// is a nonzero constant multiple of the true remainder, made primitive.
pub(crate) fn reduce(f: &IPoly, basis: &[&IPoly], order: MonomialOrder) -> IPoly {
    let mut rest: Terms = f.terms.clone();
    let mut done: Terms = Vec::new();
    let mut steps = 0usize;
    while !rest.is_empty() {
        let (m, c) = rest[0].clone();
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let lg = &g.terms[0].1;
                let d = c.gcd(lg);
                let a = lg / &d;
                let b = &c / &d;
                let shift = g.lm().quotient(&m);
                rest = combine(&rest, &a, &b, &shift, &g.terms, order);
                debug_assert!(rest.first().is_none_or(|t| t.0 != m));
                if !a.is_one() {
                    for (_, v) in done.iter_mut() {
                        *v *= &a;
                    }
                }
                steps += 1;
                if steps.is_multiple_of(8) {
                    // keep coefficient growth in check
                    let mut g = content(&rest);
                    for (_, v) in &done {
                        if g.is_one() {
                            break;
                        }
                        g = g.gcd(v);
                    }
                    if !g.is_one() && !g.is_zero() {
                        for (_, v) in rest.iter_mut().chain(done.iter_mut()) {
                            *v = &*v / &g;
                        }
                    }
                }
            }
            None => {
                done.push(rest.remove(0));
            }
        }
    }
    make_primitive(&mut done);
    IPoly {
        terms: done,
        sugar: f.sugar,
    }
}

#[derive(Clone, Copy, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct Engine {
    order: MonomialOrder,
    polys: Vec<IPoly>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl Engine {
    fn pair_sugar(&self, i: usize, j: usize, lcm: &Monomial) -> u32 {
        let o = self.order;
        let (p, q) = (&self.polys[i], &self.polys[j]);
        let sp = p.sugar - o.sugar_degree(&p.lm());
        let sq = q.sugar - o.sugar_degree(&q.lm());
        sp.max(sq) + o.sugar_degree(lcm)
    }

    /// Inserts `h` and updates the pair set (Gebauer–Möller).
    fn update(&mut self, h: IPoly) {
        let hi = self.polys.len();
        let hlm = h.lm();
        self.polys.push(h);
        self.active.push(true);

        let mut c: Vec<(usize, Monomial)> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| (g, hlm.lcm(&self.polys[g].lm())))
            .collect();
        // criterion M and F: keep only pairs whose lcm is minimal
        let mut d: Vec<(usize, Monomial)> = Vec::new();
        while let Some((g1, l1)) = c.pop() {
            let coprime = hlm.is_coprime(&self.polys[g1].lm());
            let dominated = c.iter().chain(d.iter()).any(|(_, l2)| l2.divides(&l1));
            if coprime || !dominated {
                d.push((g1, l1));
            }
        }
        // product criterion
        let e: Vec<(usize, Monomial)> = d
            .into_iter()
            .filter(|(g, _)| !hlm.is_coprime(&self.polys[*g].lm()))
            .collect();
        // chain criterion on old pairs
        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(hlm.divides(&p.lcm)
                && polys[p.i].lm().lcm(&hlm) != p.lcm
                && hlm.lcm(&polys[p.j].lm()) != p.lcm)
        });
        for (g, lcm) in e {
            let sugar = self.pair_sugar(g, hi, &lcm);
            self.pairs.push(Pair { i: g, j: hi, lcm, sugar });
        }
        for g in 0..hi {
            if self.active[g] && hlm.divides(&self.polys[g].lm()) {
                self.active[g] = false;
            }
        }
    }

    fn s_poly(&self, p: &Pair) -> IPoly {
        let (f, g) = (&self.polys[p.i], &self.polys[p.j]);
        let (cf, cg) = (&f.terms[0].1, &g.terms[0].1);
        let d = cf.gcd(cg);
        let a = cg / &d;
        let b = cf / &d;
        // a * (lcm/lm f) * f - b * (lcm/lm g) * g
        let mf = f.lm().quotient(&p.lcm);
        let mg = g.lm().quotient(&p.lcm);
        let fs: Terms = f.terms.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
        let mut terms = combine(&fs, &a, &b, &mg, &g.terms, self.order);
        make_primitive(&mut terms);
        IPoly { terms, sugar: p.sugar }
    }

    fn reducers(&self) -> Vec<&IPoly> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(p, _)| p)
            .collect()
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`, monic, sorted
/// increasingly by leading monomial. When `max_sugar` is set, pairs and
/// generators of larger sugar degree are skipped: for homogeneous input the
/// result is then a basis up to that degree.
pub(crate) fn groebner(gens: &[Polynomial], nvars: usize, order: MonomialOrder, max_sugar: Option<u32>) -> Vec<Polynomial> {
    let mut pending: Vec<IPoly> = gens
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| to_ipoly(p, order))
        .collect();
    // process lowest degree first; ties by leading monomial
    pending.sort_by(|a, b| b.sugar.cmp(&a.sugar).then_with(|| order.cmp(&a.lm(), &b.lm())));
    let mut engine = Engine {
        order,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    loop {
        let best_pair = engine
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.sugar.cmp(&b.sugar).then_with(|| order.cmp(&a.lcm, &b.lcm)))
            .map(|(k, p)| (k, p.sugar));
        let next_gen_sugar = pending.last().map(|p| p.sugar);
        let candidate = match (best_pair, next_gen_sugar) {
            (None, None) => break,
            (Some((k, s)), Some(gs)) if s < gs => {
                let p = engine.pairs.swap_remove(k);
                engine.s_poly(&p)
            }
            (Some((k, _)), None) => {
                let p = engine.pairs.swap_remove(k);
                engine.s_poly(&p)
            }
            (_, Some(_)) => pending.pop().expect("pending generator"),
        };
        if max_sugar.is_some_and(|d| candidate.sugar > d) {
            continue;
        }
        if candidate.terms.is_empty() {
            continue;
        }
        let h = reduce(&candidate, &engine.reducers(), order);
        if h.terms.is_empty() {
            continue;
        }
        if h.lm().degree() == 0 {
            return vec![Polynomial::one(nvars).with_order(order)];
        }
        engine.update(h);
    }
    interreduce(engine.reducers().into_iter().cloned().collect(), nvars, order)
}

/// Turns a Gröbner basis with pairwise non-dividing leading monomials into
/// the reduced one.
fn interreduce(mut basis: Vec<IPoly>, nvars: usize, order: MonomialOrder) -> Vec<Polynomial> {
    basis.sort_by(|a, b| order.cmp(&a.lm(), &b.lm()));
    let mut out: Vec<IPoly> = Vec::with_capacity(basis.len());
    for k in 0..basis.len() {
        let others: Vec<&IPoly> = basis
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, p)| p)
            .collect();
        let lead = IPoly {
            terms: vec![basis[k].terms[0].clone()],
            sugar: 0,
        };
        let tail = IPoly {
            terms: basis[k].terms[1..].to_vec(),
            sugar: basis[k].sugar,
        };
        // reduce the tail, then restore the leading term with matching scale
        let lc = &basis[k].terms[0].1;
        let red = reduce_scaled(&tail, &others, order);
        let mut terms = vec![(lead.terms[0].0, lc * &red.1)];
        terms.extend(red.0.terms);
        make_primitive(&mut terms);
        out.push(IPoly {
            terms,
            sugar: basis[k].sugar,
        });
    }
    out.iter().map(|p| to_monic(p, nvars, order)).collect()
}

/// Like [`reduce`] but returns `(r, s)` with `s * f ≡ r` exactly.
fn reduce_scaled(f: &IPoly, basis: &[&IPoly], order: MonomialOrder) -> (IPoly, BigInt) {
    let mut rest: Terms = f.terms.clone();
    let mut done: Terms = Vec::new();
    let mut scale = BigInt::one();
    while !rest.is_empty() {
        let (m, c) = rest[0].clone();
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let lg = &g.terms[0].1;
                let d = c.gcd(lg);
                let a = lg / &d;
                let b = &c / &d;
                let shift = g.lm().quotient(&m);
                rest = combine(&rest, &a, &b, &shift, &g.terms, order);
                if !a.is_one() {
                    for (_, v) in done.iter_mut() {
                        *v *= &a;
                    }
                    scale *= &a;
                }
            }
            None => done.push(rest.remove(0)),
        }
    }
    (
        IPoly {
            terms: done,
            sugar: f.sugar,
        },
        scale,
    )
}
