//! Graded Betti numbers of `S/J` from the homology of the Koszul complex on
//! the variables, and a bounded minimal resolution of the residue field over
//! `R = S/J`.
//!
//! Both work on graded pieces of `R`, described by standard monomials of a
//! Gröbner basis and multiplication-by-a-variable tables.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{binom, k_polynomial};
use crate::ideal_ops::{GroebnerBasis, Ideal};
use crate::multipoly::linalg::{
    kernel, random_primes, rank_in_place, FieldOps, IncrementalEchelon, PrimeField, RankPath, Rationals,
    DEFAULT_PRIME_SEED,
};
use crate::multipoly::{monomials_of_degree, Monomial, MonomialOrder};

/// Graded pieces of `R = S/J` up to a top degree.
pub struct GradedQuotient {
    nvars: usize,
    gb: Arc<GroebnerBasis>,
    basis: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
    /// `factor[d][k] = (v, k')` with `basis[d][k] = x_v * basis[d - 1][k']`
    factor: Vec<Vec<(usize, usize)>>,
}

struct Tables<E> {
    /// `mult[d][v][k]`: coordinates of `x_v * basis[d][k]` in `basis[d + 1]`
    mult: Vec<Vec<Vec<Vec<(usize, E)>>>>,
}

impl GradedQuotient {
    pub fn new(ideal: &Ideal, top: u32) -> Result<Self> {
        ideal.require_homogeneous()?;
        let gb = ideal.groebner_shared();
        let nvars = ideal.nvars();
        let n = nvars - 1;
        let basis: Vec<Vec<Monomial>> = (0..=top)
            .map(|d| {
                if gb.is_unit() {
                    Vec::new()
                } else {
                    monomials_of_degree(n, d).into_iter().filter(|m| gb.is_standard(m)).collect()
                }
            })
            .collect();
        let index: Vec<HashMap<Monomial, usize>> =
            basis.iter().map(|b| b.iter().enumerate().map(|(k, m)| (*m, k)).collect()).collect();
        let factor = (0..=top as usize)
            .map(|d| {
                if d == 0 {
                    return Vec::new();
                }
                basis[d]
                    .iter()
                    .map(|m| {
                        let v = m.last_var().expect("positive degree");
                        let rest = m.checked_div_var(v).expect("divisible");
                        (v, index[d - 1][&rest])
                    })
                    .collect()
            })
            .collect();
        Ok(GradedQuotient {
            nvars,
            gb,
            basis,
            index,
            factor,
        })
    }

    pub fn top(&self) -> u32 {
        self.basis.len() as u32 - 1
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.gb
    }

    /// `dim R_d`, zero for negative or out-of-range degrees.
    pub fn dim(&self, d: i64) -> usize {
        if d < 0 {
            0
        } else {
            self.basis.get(d as usize).map_or(0, Vec::len)
        }
    }

    pub fn basis(&self, d: u32) -> &[Monomial] {
        &self.basis[d as usize]
    }

    /// Multiplication tables over `f`. Normal forms of all monomials of a
    /// degree are built in increasing order: a monomial `u * lm(g)` reduces
    /// to `-u * tail(g)`, whose terms are smaller and already done.
    fn tables<F: FieldOps>(&self, f: &F) -> Option<Tables<F::Elem>> {
        let n = self.nvars - 1;
        let mut reducers = Vec::new();
        for g in self.gb.elements() {
            let mut terms = g.terms().iter();
            let (lm, _) = terms.next().expect("nonzero");
            let tail = terms
                .map(|(m, c)| Some((*m, f.neg(&f.from_rational(c)?))))
                .collect::<Option<Vec<_>>>()?;
            reducers.push((*lm, tail));
        }
        let mut mult = Vec::new();
        for d in 0..self.top() as usize {
            let e = d + 1;
            let dim = self.basis[e].len();
            let mut monos = monomials_of_degree(n, e as u32);
            monos.sort_by(|a, b| MonomialOrder::Grevlex.cmp(a, b));
            let mut nf: HashMap<Monomial, Vec<F::Elem>> = HashMap::with_capacity(monos.len());
            for m in monos {
                let mut v = vec![f.zero(); dim];
                if let Some(&k) = self.index[e].get(&m) {
                    v[k] = f.one();
                } else if dim > 0 {
                    let (lm, tail) = reducers.iter().find(|(lm, _)| lm.divides(&m)).expect("in the initial ideal");
                    let u = lm.quotient(&m);
                    for (t, c) in tail {
                        let w = &nf[&u.mul(t)];
                        for (a, b) in v.iter_mut().zip(w) {
                            if !f.is_zero(b) {
                                *a = f.add(a, &f.mul(c, b));
                            }
                        }
                    }
                }
                nf.insert(m, v);
            }
            let per_var = (0..self.nvars)
                .map(|x| {
                    self.basis[d]
                        .iter()
                        .map(|b| {
                            nf[&b.mul_var(x)]
                                .iter()
                                .enumerate()
                                .filter(|(_, c)| !f.is_zero(c))
                                .map(|(k, c)| (k, c.clone()))
                                .collect()
                        })
                        .collect()
                })
                .collect();
            mult.push(per_var);
        }
        Some(Tables { mult })
    }
}

/// Graded Betti numbers `beta_{i,j}` of `S/J` within `i <= imax`, `j <= jmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, u32), u64>,
    imax: usize,
    jmax: u32,
    truncated: bool,
    path: RankPath,
}

impl BettiTable {
    pub fn get(&self, i: usize, j: u32) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero entries.
    pub fn entries(&self) -> &BTreeMap<(usize, u32), u64> {
        &self.entries
    }

    pub fn imax(&self) -> usize {
        self.imax
    }

    pub fn jmax(&self) -> u32 {
        self.jmax
    }

    /// Set when the bounds provably miss part of the table.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn rank_path(&self) -> &RankPath {
        &self.path
    }

    /// Largest `i` with a nonzero entry within the bounds.
    pub fn max_index(&self) -> usize {
        self.entries.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    /// Largest `j - i` over nonzero entries within the bounds.
    pub fn max_row(&self) -> u32 {
        self.entries.keys().map(|&(i, j)| j - i as u32).max().unwrap_or(0)
    }

    /// Macaulay2-style layout: columns `i`, rows `j - i`.
    pub fn render(&self) -> String {
        let cols = self.max_index() + 1;
        let rows = self.max_row() + 1;
        let cell = |v: u64| if v == 0 { ".".to_string() } else { v.to_string() };
        let totals: Vec<u64> = (0..cols).map(|i| (0..=self.jmax).map(|j| self.get(i, j)).sum()).collect();
        let mut grid: Vec<Vec<String>> = Vec::new();
        grid.push(std::iter::once(String::new()).chain((0..cols).map(|i| i.to_string())).collect());
        grid.push(std::iter::once("total:".to_string()).chain(totals.iter().map(|&t| t.to_string())).collect());
        for r in 0..rows {
            let mut line = vec![format!("{r}:")];
            line.extend((0..cols).map(|i| cell(self.get(i, r + i as u32))));
            grid.push(line);
        }
        let widths: Vec<usize> = (0..=cols).map(|c| grid.iter().map(|l| l[c].len()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for line in &grid {
            let mut s = String::new();
            for (c, w) in line.iter().zip(&widths) {
                let _ = write!(s, "{c:>w$} ", w = *w);
            }
            out.push_str(s.trim_end());
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|(&(i, j), &v)| serde_json::json!({"i": i, "j": j, "value": v}))
            .collect();
        let mut obj = serde_json::Map::new();
        obj.insert("imax".into(), self.imax.into());
        obj.insert("jmax".into(), self.jmax.into());
        obj.insert("truncated".into(), self.truncated.into());
        obj.insert("entries".into(), entries.into());
        if !self.truncated {
            obj.insert("pdim".into(), self.max_index().into());
            obj.insert("reg".into(), self.max_row().into());
        }
        obj.insert("rank_path".into(), serde_json::to_value(&self.path).expect("serializable"));
        serde_json::Value::Object(obj)
    }
}

/// Projective dimension: the length of the table.
pub fn pdim_of(table: &BettiTable) -> Result<usize> {
    if table.truncated {
        return Err(Error::Truncated("projective dimension needs the whole table".into()));
    }
    Ok(table.max_index())
}

/// Castelnuovo–Mumford regularity: the height of the table.
pub fn reg_of(table: &BettiTable) -> Result<u32> {
    if table.truncated {
        return Err(Error::Truncated("regularity needs the whole table".into()));
    }
    Ok(table.max_row())
}

/// Bound that Koszul algebras with `g` quadric relations satisfy:
/// `beta_{i,2i} <= C(g, i)` for `2 <= i <= g`.
pub fn mantero_inequality_check(table: &BettiTable, g: u64) -> bool {
    (2..=g).all(|i| {
        let v = table.get(i as usize, 2 * i as u32);
        binom(g, i) >= v.into()
    })
}

fn subsets(nvars: usize, size: usize) -> Vec<u32> {
    (0u32..1 << nvars).filter(|s| s.count_ones() as usize == size).collect()
}

/// Rank of the Koszul differential `K_i ⊗ R_{j-i} -> K_{i-1} ⊗ R_{j-i+1}`.
fn koszul_rank<F: FieldOps>(f: &F, q: &GradedQuotient, t: &Tables<F::Elem>, i: usize, j: u32) -> usize {
    if i == 0 || i > q.nvars || (j as usize) < i {
        return 0;
    }
    let d = (j as usize - i) as i64;
    let (src, dst) = (q.dim(d), q.dim(d + 1));
    if src == 0 || dst == 0 {
        return 0;
    }
    let targets = subsets(q.nvars, i - 1);
    let target_index: HashMap<u32, usize> = targets.iter().enumerate().map(|(k, s)| (*s, k)).collect();
    let cols = targets.len() * dst;
    let mut rows = Vec::new();
    for s in subsets(q.nvars, i) {
        for k in 0..src {
            let mut row = vec![f.zero(); cols];
            let mut position = 0;
            for v in 0..q.nvars {
                if s & (1 << v) == 0 {
                    continue;
                }
                let base = target_index[&(s & !(1 << v))] * dst;
                for (k2, c) in &t.mult[d as usize][v][k] {
                    let c = if position % 2 == 0 { c.clone() } else { f.neg(c) };
                    row[base + k2] = f.add(&row[base + k2], &c);
                }
                position += 1;
            }
            rows.push(row);
        }
    }
    rank_in_place(f, &mut rows, cols)
}

fn koszul_ranks<F: FieldOps>(f: &F, q: &GradedQuotient, imax: usize, jmax: u32) -> Option<BTreeMap<(usize, u32), usize>> {
    let t = q.tables(f)?;
    let cells: Vec<(usize, u32)> = (1..=(imax + 1).min(q.nvars)).flat_map(|i| (0..=jmax).map(move |j| (i, j))).collect();
    Some(cells.par_iter().map(|&(i, j)| ((i, j), koszul_rank(f, q, &t, i, j))).collect())
}

/// Graded Betti numbers of `S/J` for `i <= imax`, `j <= jmax` via
/// `beta_{i,j} = dim H_i(K(x) ⊗ S/J)_j`.
///
/// Ranks are taken modulo three random primes unless `exact` is set; a cell
/// whose primes disagree is recomputed over the rationals.
pub fn graded_betti(ideal: &Ideal, imax: usize, jmax: u32, exact: bool) -> Result<BettiTable> {
    if imax > ideal.nvars() {
        return Err(Error::OutOfRange(format!("imax = {imax} exceeds the number of variables {}", ideal.nvars())));
    }
    let q = GradedQuotient::new(ideal, jmax)?;
    let (ranks, path) = if exact {
        (koszul_ranks(&Rationals, &q, imax, jmax).expect("rationals"), RankPath::Exact)
    } else {
        let primes = random_primes(3, DEFAULT_PRIME_SEED);
        let runs: Option<Vec<_>> = primes.iter().map(|&p| koszul_ranks(&PrimeField::new(p), &q, imax, jmax)).collect();
        match runs {
            Some(runs) if runs.windows(2).all(|w| w[0] == w[1]) => {
                (runs.into_iter().next().expect("three runs"), RankPath::MultiModular { primes })
            }
            _ => (koszul_ranks(&Rationals, &q, imax, jmax).expect("rationals"), RankPath::Exact),
        }
    };
    let rank = |i: usize, j: u32| ranks.get(&(i, j)).copied().unwrap_or(0);
    let mut entries = BTreeMap::new();
    for i in 0..=imax {
        for j in 0..=jmax {
            if (j as usize) < i {
                continue;
            }
            let chain = binom(q.nvars as u64, i as u64) * q.dim(j as i64 - i as i64);
            let chain: u64 = chain.try_into().expect("chain dimension fits");
            let b = chain - rank(i, j) as u64 - rank(i + 1, j) as u64;
            if b > 0 {
                entries.insert((i, j), b);
            }
        }
    }
    let kpoly_degree = if q.gb.is_unit() {
        0
    } else {
        k_polynomial(&q.gb.leading_monomials(), q.nvars).len().saturating_sub(1) as u32
    };
    let truncated =
        kpoly_degree > jmax || (imax < q.nvars && entries.keys().any(|&(i, _)| i == imax));
    Ok(BettiTable {
        entries,
        imax,
        jmax,
        truncated,
        path,
    })
}

/// Bounded minimal free resolution of the residue field over `R = S/J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueResolution {
    /// `beta^R_{i,j}` for `i <= steps`, `j <= cutoff`
    pub betti: BTreeMap<(usize, u32), u64>,
    pub steps: usize,
    pub cutoff: u32,
    /// Set when the cutoff cannot reach the linear strand of the last step.
    pub cutoff_too_small: bool,
    pub path: RankPath,
}

impl ResidueResolution {
    pub fn get(&self, i: usize, j: u32) -> u64 {
        self.betti.get(&(i, j)).copied().unwrap_or(0)
    }

    /// True when every computed `beta_{i,j}` with `i != j` vanishes.
    pub fn is_linear(&self) -> bool {
        self.betti.iter().all(|(&(i, j), &v)| v == 0 || i == j as usize)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .betti
            .iter()
            .map(|(&(i, j), &v)| serde_json::json!({"i": i, "j": j, "value": v}))
            .collect();
        serde_json::json!({
            "steps": self.steps,
            "cutoff": self.cutoff,
            "cutoff_too_small": self.cutoff_too_small,
            "linear": self.is_linear(),
            "entries": entries,
            "rank_path": self.path,
        })
    }
}

/// A graded free `R`-module with the images of its generators in the
/// previous module of the resolution.
struct FreeModule<E> {
    degrees: Vec<u32>,
    images: Vec<Vec<E>>,
}

/// Coordinates of the degree-`j` piece of a free module: one block of
/// standard monomials per generator of degree at most `j`.
fn layout(q: &GradedQuotient, degrees: &[u32], j: u32) -> (Vec<Option<usize>>, usize) {
    let mut offsets = Vec::with_capacity(degrees.len());
    let mut total = 0;
    for &a in degrees {
        if a <= j {
            offsets.push(Some(total));
            total += q.dim((j - a) as i64);
        } else {
            offsets.push(None);
        }
    }
    (offsets, total)
}

/// `x_v * e` for `e` in the degree-`j` piece of the free module.
fn times_var<F: FieldOps>(
    f: &F,
    q: &GradedQuotient,
    t: &Tables<F::Elem>,
    degrees: &[u32],
    e: &[F::Elem],
    j: u32,
    v: usize,
) -> Vec<F::Elem> {
    let (from, _) = layout(q, degrees, j);
    let (to, len) = layout(q, degrees, j + 1);
    let mut out = vec![f.zero(); len];
    for (g, &a) in degrees.iter().enumerate() {
        let (Some(src), Some(dst)) = (from[g], to[g]) else {
            continue;
        };
        let d = (j - a) as usize;
        for k in 0..q.dim(d as i64) {
            let c = &e[src + k];
            if f.is_zero(c) {
                continue;
            }
            for (k2, m) in &t.mult[d][v][k] {
                out[dst + k2] = f.add(&out[dst + k2], &f.mul(c, m));
            }
        }
    }
    out
}

fn resolve<F: FieldOps>(f: &F, q: &GradedQuotient, steps: usize, cutoff: u32) -> Option<BTreeMap<(usize, u32), u64>> {
    let t = q.tables(f)?;
    let mut betti = BTreeMap::new();
    betti.insert((0, 0), 1);
    if steps == 0 || cutoff == 0 || q.dim(0) == 0 {
        return Some(betti);
    }
    // F_1 -> F_0 = R sends the generators to a basis of R_1
    let h1 = q.dim(1);
    let mut prev_degrees = vec![0u32];
    let mut current = FreeModule {
        degrees: vec![1; h1],
        images: (0..h1)
            .map(|k| {
                let mut e = vec![f.zero(); h1];
                e[k] = f.one();
                e
            })
            .collect(),
    };
    if h1 > 0 {
        betti.insert((1, 1), h1 as u64);
    }
    for i in 1..steps {
        // images of the degree-j basis of F_i in F_{i-1}, built degree by degree
        let mut next = FreeModule {
            degrees: Vec::new(),
            images: Vec::new(),
        };
        let mut rows_prev: Vec<Vec<F::Elem>> = Vec::new();
        let mut kernel_prev: Vec<Vec<F::Elem>> = Vec::new();
        for j in 0..=cutoff {
            let (offsets, dim_here) = layout(q, &current.degrees, j);
            let (_, dim_below) = layout(q, &prev_degrees, j);
            let (prev_offsets, _) = if j > 0 { layout(q, &current.degrees, j - 1) } else { (Vec::new(), 0) };
            let mut rows = vec![Vec::new(); dim_here];
            for (g, &a) in current.degrees.iter().enumerate() {
                let Some(off) = offsets[g] else { continue };
                if a == j {
                    rows[off] = current.images[g].clone();
                    continue;
                }
                let d = (j - a) as usize;
                let src = prev_offsets[g].expect("generator of lower degree");
                for k in 0..q.dim(d as i64) {
                    let (v, k1) = q.factor[d][k];
                    rows[off + k] = times_var(f, q, &t, &prev_degrees, &rows_prev[src + k1], j - 1, v);
                }
            }
            // kernel of F_i -> F_{i-1} in degree j
            let kernel_here: Vec<Vec<F::Elem>> = if dim_here == 0 {
                Vec::new()
            } else if dim_below == 0 {
                (0..dim_here)
                    .map(|k| {
                        let mut e = vec![f.zero(); dim_here];
                        e[k] = f.one();
                        e
                    })
                    .collect()
            } else {
                let transposed: Vec<Vec<F::Elem>> =
                    (0..dim_below).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect();
                kernel(f, &transposed, dim_here)
            };
            // minimal generators: kernel modulo R_1 times the kernel one degree down
            let mut span = IncrementalEchelon::new(f, dim_here);
            if j > 0 {
                for w in &kernel_prev {
                    for v in 0..q.nvars {
                        span.insert(times_var(f, q, &t, &current.degrees, w, j - 1, v));
                    }
                }
            }
            let mut new = 0;
            for w in &kernel_here {
                if span.rank() == kernel_here.len() {
                    break;
                }
                if span.insert(w.clone()) {
                    next.degrees.push(j);
                    next.images.push(w.clone());
                    new += 1;
                }
            }
            if new > 0 {
                betti.insert((i + 1, j), new);
            }
            rows_prev = rows;
            kernel_prev = kernel_here;
        }
        prev_degrees = std::mem::take(&mut current.degrees);
        current = next;
    }
    Some(betti)
}

/// Minimal free resolution of the residue field over `R = S/J`, computed
/// degree by degree for `steps` homological steps and internal degrees up to
/// `cutoff`. A finite probe: linearity here supports, but does not prove,
/// that `R` is Koszul.
pub fn residue_field_resolution(ideal: &Ideal, steps: usize, cutoff: u32, exact: bool) -> Result<ResidueResolution> {
    let q = GradedQuotient::new(ideal, cutoff)?;
    let (betti, path) = if exact {
        (resolve(&Rationals, &q, steps, cutoff).expect("rationals"), RankPath::Exact)
    } else {
        let primes = random_primes(2, DEFAULT_PRIME_SEED);
        let runs: Option<Vec<_>> = primes.iter().map(|&p| resolve(&PrimeField::new(p), &q, steps, cutoff)).collect();
        match runs {
            Some(runs) if runs.windows(2).all(|w| w[0] == w[1]) => {
                (runs.into_iter().next().expect("two runs"), RankPath::MultiModular { primes })
            }
            _ => (resolve(&Rationals, &q, steps, cutoff).expect("rationals"), RankPath::Exact),
        }
    };
    Ok(ResidueResolution {
        betti,
        steps,
        cutoff,
        cutoff_too_small: (cutoff as usize) < steps,
        path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_ring_has_trivial_table() {
        let t = graded_betti(&Ideal::zero(3), 4, 5, false).unwrap();
        assert_eq!(t.entries().len(), 1);
        assert_eq!(t.get(0, 0), 1);
        assert_eq!(pdim_of(&t).unwrap(), 0);
        assert_eq!(reg_of(&t).unwrap(), 0);
        assert!(mantero_inequality_check(&t, 0));
    }

    #[test]
    fn koszul_complex_of_two_variables() {
        let i = Ideal::parse(3, &["x0", "x1"]).unwrap();
        for exact in [false, true] {
            let t = graded_betti(&i, 4, 4, exact).unwrap();
            assert_eq!(t.get(1, 1), 2);
            assert_eq!(t.get(2, 2), 1);
            assert_eq!(t.entries().len(), 3);
        }
    }

    #[test]
    fn skew_lines() {
        let i = Ideal::parse(3, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]).unwrap();
        let t = graded_betti(&i, 4, 5, false).unwrap();
        assert_eq!(t.get(1, 2), 4);
        assert_eq!(t.get(2, 3), 4);
        assert_eq!(t.get(3, 4), 1);
        assert!(!t.truncated());
        assert_eq!(reg_of(&t).unwrap(), 1);
    }

    #[test]
    fn residue_field_over_polynomial_ring_is_koszul_complex() {
        let r = residue_field_resolution(&Ideal::zero(2), 3, 4, false).unwrap();
        assert_eq!(r.get(1, 1), 3);
        assert_eq!(r.get(2, 2), 3);
        assert_eq!(r.get(3, 3), 1);
        assert!(r.is_linear());
    }

    #[test]
    fn residue_field_over_hypersurface() {
        // R = k[x0, x1]/(x0^3): the second syzygy picks up the cubic
        let r = residue_field_resolution(&Ideal::parse(1, &["x0^3"]).unwrap(), 3, 5, true).unwrap();
        assert_eq!(r.get(1, 1), 2);
        assert_eq!(r.get(2, 2), 1);
        assert_eq!(r.get(2, 3), 1);
        assert!(!r.is_linear());
    }

    #[test]
    fn render_layout() {
        let i = Ideal::parse(3, &["x0", "x1"]).unwrap();
        let t = graded_betti(&i, 4, 4, false).unwrap();
        assert_eq!(t.render(), "       0 1 2\ntotal: 1 2 1\n    0: 1 2 1\n");
    }
}
