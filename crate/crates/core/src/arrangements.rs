//! Line arrangements in `P^n`: constructors, defining ideals and position
//! certificates.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert;
use crate::ideal_ops::{intersect, Ideal};
use crate::multipoly::linalg::{kernel, rank, Rationals};
use crate::multipoly::{parse_polynomial_with, parse_rational, Polynomial};

/// Coordinates of random points are drawn from `[-BOX, BOX]`.
pub const COORDINATE_BOX: i64 = 1_000_000;

/// A line given by `n - 1` independent linear forms, optionally with two
/// points spanning it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    forms: Vec<Polynomial>,
    points: Option<[Vec<BigRational>; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Generic { seed: u64 },
    Staircase,
    /// Half the lines on coordinate subspaces, half on subspaces of a random
    /// coordinate system `l = A x`.
    Split { seed: u64 },
    Named { id: String, params: Vec<String> },
    Given,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineArrangement {
    n: usize,
    lines: Vec<Line>,
    provenance: Provenance,
}

/// Identifiers of the bundled special configurations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedId {
    /// Five lines in `P^6` in normal form, with parameters `a`, `b`.
    FiveP6 { a: BigRational, b: BigRational },
    /// Three lines in `P^4` whose ideal needs a cubic generator.
    ThreeP4,
    /// Four lines in `P^3` in general linear position but not generic.
    FourP3Special,
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Scales a rational vector to a primitive integer vector with positive
/// first nonzero entry.
fn primitive(v: &[BigRational]) -> Vec<BigRational> {
    let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return v.to_vec();
    }
    if ints.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    ints.into_iter().map(|c| BigRational::from_integer(c / &g)).collect()
}

impl Line {
    /// The line through two distinct points.
    pub fn through(p: Vec<BigRational>, r: Vec<BigRational>) -> Result<Self> {
        if p.len() != r.len() {
            return Err(Error::Ambient {
                expected: p.len(),
                found: r.len(),
            });
        }
        let nvars = p.len();
        if rank(&Rationals, &[p.clone(), r.clone()], nvars) != 2 {
            return Err(Error::Genericity("points do not span a line".into()));
        }
        let forms = kernel(&Rationals, &[p.clone(), r.clone()], nvars)
            .iter()
            .map(|v| Polynomial::linear(&primitive(v)))
            .collect();
        Ok(Line {
            forms,
            points: Some([p, r]),
        })
    }

    /// The line cut out by `forms`, which must have rank `nvars - 2`.
    pub fn from_forms(forms: Vec<Polynomial>) -> Result<Self> {
        let nvars = forms.first().map(|f| f.nvars()).unwrap_or(0);
        for f in &forms {
            if !f.is_linear_form() {
                return Err(Error::NonLinear(f.to_string()));
            }
            if f.nvars() != nvars {
                return Err(Error::Ambient {
                    expected: nvars,
                    found: f.nvars(),
                });
            }
        }
        let rows: Vec<Vec<BigRational>> = forms.iter().map(|f| f.linear_coefficients()).collect();
        let kern = kernel(&Rationals, &rows, nvars);
        if kern.len() != 2 || forms.len() + 2 != nvars {
            return Err(Error::Genericity(format!(
                "{} forms in {} variables do not define a line",
                forms.len(),
                nvars
            )));
        }
        let points = [primitive(&kern[0]), primitive(&kern[1])];
        Ok(Line {
            forms,
            points: Some(points),
        })
    }

    pub fn forms(&self) -> &[Polynomial] {
        &self.forms
    }

    pub fn points(&self) -> Option<&[Vec<BigRational>; 2]> {
        self.points.as_ref()
    }

    pub fn ideal(&self) -> Ideal {
        let n = self.forms[0].nvars() - 1;
        Ideal::new(n, self.forms.clone()).expect("forms share the ambient ring")
    }
}

fn random_point(rng: &mut ChaCha8Rng, nvars: usize) -> Vec<BigRational> {
    (0..nvars).map(|_| q(rng.gen_range(-COORDINATE_BOX..=COORDINATE_BOX))).collect()
}

fn check_params(m: usize, n: usize) -> Result<()> {
    if m < 1 {
        return Err(Error::OutOfRange("need at least one line".into()));
    }
    if !(3..=14).contains(&n) {
        return Err(Error::OutOfRange(format!("ambient dimension {n} outside 3..=14")));
    }
    Ok(())
}

/// `m` lines through pairs of random integer points; deterministic in the seed.
pub fn random_generic(m: usize, n: usize, seed: u64) -> Result<LineArrangement> {
    check_params(m, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::with_capacity(m);
    let mut retries = 0;
    while lines.len() < m {
        let p = random_point(&mut rng, n + 1);
        let r = random_point(&mut rng, n + 1);
        match Line::through(p, r) {
            Ok(line) => lines.push(line),
            Err(_) if retries < 100 => retries += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(LineArrangement {
        n,
        lines,
        provenance: Provenance::Generic { seed },
    })
}

/// The coordinate line `(x_j : j ∉ {n-2i+1, n-2i+2})`, for `i >= 1`.
fn staircase_excluded(n: usize, i: usize) -> [usize; 2] {
    [n + 1 - 2 * i, n + 2 - 2 * i]
}

/// Lines spanned by pairs of coordinate points: `L_i` is cut out by every
/// variable except `x_{n-2i+1}, x_{n-2i+2}`. Requires `2m <= n + 1`.
pub fn staircase(m: usize, n: usize) -> Result<LineArrangement> {
    check_params(m, n)?;
    if 2 * m > n + 1 {
        return Err(Error::OutOfRange(format!("staircase needs 2m <= n+1, got m={m}, n={n}")));
    }
    let lines = (1..=m)
        .map(|i| {
            let [a, b] = staircase_excluded(n, i);
            coordinate_line(n, a, b)
        })
        .collect();
    Ok(LineArrangement {
        n,
        lines,
        provenance: Provenance::Staircase,
    })
}

fn unit(n: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n + 1];
    v[i] = BigRational::one();
    v
}

fn coordinate_line(n: usize, a: usize, b: usize) -> Line {
    let forms = (0..=n)
        .filter(|&j| j != a && j != b)
        .map(|j| Polynomial::var(n + 1, j))
        .collect();
    Line {
        forms,
        points: Some([unit(n, a), unit(n, b)]),
    }
}

/// A random invertible integer matrix with entries in the coordinate box,
/// together with its inverse.
fn random_coordinates(n: usize, rng: &mut ChaCha8Rng) -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>) {
    loop {
        let a: Vec<Vec<BigRational>> = (0..=n).map(|_| random_point(rng, n + 1)).collect();
        if let Some(inv) = invert(&a) {
            return (a, inv);
        }
    }
}

fn invert(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let size = a.len();
    let mut rows: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend(unit(size - 1, i));
            row
        })
        .collect();
    let pivots = crate::multipoly::linalg::rref(&Rationals, &mut rows, 2 * size);
    if pivots.len() != size || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(rows.into_iter().map(|r| r[size..].to_vec()).collect())
}

/// Layout with `kx` coordinate lines and `kl` lines in the coordinates
/// `l = A x` for a random `A`: `L_i = (x_j : j ∉ {n-2i+1, n-2i+2})` for
/// `i <= kx`, and the same pattern in the `l_j` for the remaining lines.
/// Returns the arrangement and the forms `l_0, ..., l_n`.
pub fn split_layout(kx: usize, kl: usize, n: usize, seed: u64) -> Result<(LineArrangement, Vec<Polynomial>)> {
    check_params(kx + kl, n)?;
    if 2 * kx.max(kl) > n + 1 {
        return Err(Error::OutOfRange(format!("split layout needs 2*max(kx, kl) <= n+1, got {kx}, {kl}, n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, inv) = random_coordinates(n, &mut rng);
    let l_forms: Vec<Polynomial> = a.iter().map(|row| Polynomial::linear(row)).collect();
    // columns of A^{-1} are the points where all l_j but one vanish
    let column = |j: usize| -> Vec<BigRational> { inv.iter().map(|row| row[j].clone()).collect() };
    let mut lines: Vec<Line> = (1..=kx)
        .map(|i| {
            let [p, r] = staircase_excluded(n, i);
            coordinate_line(n, p, r)
        })
        .collect();
    for i in 1..=kl {
        let [p, r] = staircase_excluded(n, i);
        let forms = (0..=n)
            .filter(|&j| j != p && j != r)
            .map(|j| l_forms[j].clone())
            .collect();
        lines.push(Line {
            forms,
            points: Some([primitive(&column(p)), primitive(&column(r))]),
        });
    }
    Ok((
        LineArrangement {
            n,
            lines,
            provenance: Provenance::Split { seed },
        },
        l_forms,
    ))
}

#[derive(Deserialize)]
struct NamedFile {
    n: usize,
    #[serde(default)]
    params: Vec<String>,
    lines: Vec<Vec<String>>,
}

const THREE_P4: &str = include_str!("../data/three_p4.json");
const FOUR_P3_SPECIAL: &str = include_str!("../data/four_p3_special.json");
const FIVE_P6: &str = include_str!("../data/five_p6.json");

/// Default parameters for the five-line configuration: ratios of primes
/// near `10^6`, so that no small polynomial relation holds between them.
pub fn five_p6_default_params() -> (BigRational, BigRational) {
    (
        BigRational::new(BigInt::from(1_000_003), BigInt::from(999_983)),
        BigRational::new(BigInt::from(999_979), BigInt::from(1_000_033)),
    )
}

impl NamedId {
    /// Parses `three_p4`, `four_p3_special`, `five_p6` or `five_p6(a,b)`.
    pub fn parse(id: &str) -> Result<Self> {
        let compact: String = id.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "three_p4" => return Ok(NamedId::ThreeP4),
            "four_p3_special" => return Ok(NamedId::FourP3Special),
            "five_p6" => {
                let (a, b) = five_p6_default_params();
                return Ok(NamedId::FiveP6 { a, b });
            }
            _ => {}
        }
        if let Some(args) = compact.strip_prefix("five_p6(").and_then(|s| s.strip_suffix(')')) {
            let parts: Vec<&str> = args.split(',').collect();
            if parts.len() == 2 {
                let a = parse_rational(parts[0])?;
                let b = parse_rational(parts[1])?;
                if a.is_zero() || b.is_zero() {
                    return Err(Error::OutOfRange("five_p6 parameters must be nonzero".into()));
                }
                return Ok(NamedId::FiveP6 { a, b });
            }
        }
        Err(Error::UnknownArrangement(id.to_string()))
    }

    pub fn name(&self) -> &'static str {
        match self {
            NamedId::FiveP6 { .. } => "five_p6",
            NamedId::ThreeP4 => "three_p4",
            NamedId::FourP3Special => "four_p3_special",
        }
    }

    fn params(&self) -> HashMap<String, BigRational> {
        match self {
            NamedId::FiveP6 { a, b } => HashMap::from([("a".to_string(), a.clone()), ("b".to_string(), b.clone())]),
            _ => HashMap::new(),
        }
    }
}

/// The bundled configurations, transcribed verbatim.
pub fn named(id: &NamedId) -> Result<LineArrangement> {
    let src = match id {
        NamedId::FiveP6 { .. } => FIVE_P6,
        NamedId::ThreeP4 => THREE_P4,
        NamedId::FourP3Special => FOUR_P3_SPECIAL,
    };
    let file: NamedFile = serde_json::from_str(src)?;
    let params = id.params();
    let lines = file
        .lines
        .iter()
        .map(|forms| {
            let polys = forms
                .iter()
                .map(|s| parse_polynomial_with(s, file.n + 1, &params))
                .collect::<Result<Vec<_>>>()?;
            Line::from_forms(polys)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut shown: Vec<String> = Vec::new();
    for p in &file.params {
        let v = &params[p];
        shown.push(if v.denom().is_one() {
            v.numer().to_string()
        } else {
            format!("{}/{}", v.numer(), v.denom())
        });
    }
    Ok(LineArrangement {
        n: file.n,
        lines,
        provenance: Provenance::Named {
            id: id.name().to_string(),
            params: shown,
        },
    })
}

#[derive(Serialize, Deserialize)]
struct LineJson {
    forms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<[Vec<String>; 2]>,
}

#[derive(Serialize, Deserialize)]
struct ArrangementJson {
    n: usize,
    #[serde(default = "given")]
    provenance: Provenance,
    lines: Vec<LineJson>,
}

fn given() -> Provenance {
    Provenance::Given
}

fn fmt_q(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

impl LineArrangement {
    pub fn new(n: usize, lines: Vec<Line>, provenance: Provenance) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::OutOfRange("an arrangement needs at least one line".into()));
        }
        for line in &lines {
            if line.forms.len() + 1 != n || line.forms.iter().any(|f| f.nvars() != n + 1) {
                return Err(Error::Ambient {
                    expected: n + 1,
                    found: line.forms[0].nvars(),
                });
            }
        }
        Ok(LineArrangement { n, lines, provenance })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn line_ideals(&self) -> Vec<Ideal> {
        self.lines.iter().map(Line::ideal).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let lines = self
            .lines
            .iter()
            .map(|l| LineJson {
                forms: l.forms.iter().map(|f| f.to_string()).collect(),
                points: l
                    .points
                    .as_ref()
                    .map(|[p, r]| [p.iter().map(fmt_q).collect(), r.iter().map(fmt_q).collect()]),
            })
            .collect();
        serde_json::to_value(ArrangementJson {
            n: self.n,
            provenance: self.provenance.clone(),
            lines,
        })
        .expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: ArrangementJson = serde_json::from_value(value.clone())?;
        let nvars = raw.n + 1;
        let empty = HashMap::new();
        let mut lines = Vec::with_capacity(raw.lines.len());
        for l in raw.lines {
            let forms = l
                .forms
                .iter()
                .map(|s| parse_polynomial_with(s, nvars, &empty))
                .collect::<Result<Vec<_>>>()?;
            let mut line = Line::from_forms(forms)?;
            if let Some([p, r]) = l.points {
                let p = p.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
                let r = r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
                if p.len() != nvars || r.len() != nvars {
                    return Err(Error::Ambient {
                        expected: nvars,
                        found: p.len().min(r.len()),
                    });
                }
                for f in &line.forms {
                    if !f.evaluate(&p).is_zero() || !f.evaluate(&r).is_zero() {
                        return Err(Error::Genericity(format!("point off the line cut out by {f}")));
                    }
                }
                line.points = Some([p, r]);
            }
            lines.push(line);
        }
        Self::new(raw.n, lines, raw.provenance)
    }
}

/// `J = L_1 ∩ ... ∩ L_m`, by iterated intersection, with a minimal
/// generating set in canonical order.
pub fn defining_ideal(a: &LineArrangement) -> Result<Ideal> {
    let mut ideals = a.line_ideals().into_iter();
    let mut acc = ideals.next().expect("nonempty arrangement");
    for next in ideals {
        acc = intersect(&acc, &next)?;
    }
    let minimal = acc.minimalize()?;
    minimal.regenerated(minimal.canonical_generators())
}

fn subsets(m: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, s, &mut Vec::new(), &mut out);
    out
}

/// Any `s` of the lines span a `P^{min(2s-1, n)}`.
pub fn general_position_check(a: &LineArrangement) -> Result<bool> {
    let mut pts = Vec::with_capacity(a.m());
    for line in &a.lines {
        match &line.points {
            Some(p) => pts.push(p),
            None => return Err(Error::Genericity("line without span points".into())),
        }
    }
    let cols = a.n + 1;
    let max_s = a.m().min(cols.div_ceil(2));
    for s in 1..=max_s {
        for subset in subsets(a.m(), s) {
            let rows: Vec<Vec<BigRational>> = subset.iter().flat_map(|&i| pts[i].iter().cloned()).collect();
            if rank(&Rationals, &rows, cols) != (2 * s).min(cols) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Does the Hilbert function of `S/J` match that of a generic arrangement
/// through degree `max_deg`?
pub fn genericity_certificate(a: &LineArrangement, max_deg: u32) -> Result<bool> {
    let j = defining_ideal(a)?;
    let values = hilbert::hilbert_values_gb(&j, max_deg);
    Ok((0..=max_deg).all(|d| values[d as usize] == hilbert::hh_hilbert(a.m() as u64, a.n as u64, d as u64).expect("n >= 3")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staircase_two_lines() {
        let a = staircase(2, 3).unwrap();
        let j = defining_ideal(&a).unwrap();
        assert_eq!(j.to_json()["generators"], serde_json::json!(["x0*x2", "x1*x2", "x0*x3", "x1*x3"]));
    }

    #[test]
    fn staircase_out_of_range() {
        assert!(staircase(3, 4).is_err());
    }

    #[test]
    fn generic_lines_are_reproducible() {
        let a = random_generic(3, 4, 11).unwrap();
        let b = random_generic(3, 4, 11).unwrap();
        assert_eq!(a, b);
        for line in a.lines() {
            let [p, r] = line.points().unwrap();
            for f in line.forms() {
                assert!(f.evaluate(p).is_zero() && f.evaluate(r).is_zero());
            }
            assert_eq!(line.forms().len(), 3);
        }
    }

    #[test]
    fn json_round_trip() {
        let a = random_generic(2, 3, 5).unwrap();
        let b = LineArrangement::from_json(&a.to_json()).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn named_parsing() {
        assert_eq!(NamedId::parse("three_p4").unwrap(), NamedId::ThreeP4);
        assert!(matches!(NamedId::parse("five_p6(7/3, 11/5)").unwrap(), NamedId::FiveP6 { .. }));
        assert!(matches!(NamedId::parse("six_p7"), Err(Error::UnknownArrangement(_))));
    }

    #[test]
    fn identical_lines_not_in_general_position() {
        let a = random_generic(1, 3, 2).unwrap();
        let twice = LineArrangement::new(3, vec![a.lines()[0].clone(), a.lines()[0].clone()], Provenance::Given).unwrap();
        assert!(!general_position_check(&twice).unwrap());
    }
}
