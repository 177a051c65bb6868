use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangements::five_p6_default_params;
use crate::error::{Error, Result};
use crate::ideal_ops::{colon_ideal, Ideal};
use crate::multipoly::linalg::{rank, Rationals};
use crate::multipoly::{parse_polynomial_with, Polynomial};

/// An ideal of the filtration, given by linear forms of `S` whose images
/// generate it in `R = S/J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub id: String,
    pub gens: Vec<Polynomial>,
}

/// `ideal = sub + (gen)` with `sub : ideal = colon`, all ids of members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub ideal: String,
    pub sub: String,
    pub gen: Polynomial,
    pub colon: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    n: usize,
    members: Vec<Member>,
    steps: Vec<Step>,
}

#[derive(Serialize, Deserialize)]
struct MemberJson {
    id: String,
    gens: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    ideal: String,
    sub: String,
    gen: String,
    colon: String,
}

#[derive(Serialize, Deserialize)]
struct FiltrationJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    params: Vec<String>,
    ideals: Vec<MemberJson>,
    steps: Vec<StepJson>,
}

fn linear(p: Polynomial) -> Result<Polynomial> {
    if p.is_linear_form() {
        Ok(p)
    } else {
        Err(Error::NonLinear(p.to_string()))
    }
}

impl Filtration {
    /// Checks the shape before any algebra: unique ids, linear generators,
    /// steps naming existing members, and a step for every member with
    /// generators.
    pub fn new(n: usize, members: Vec<Member>, steps: Vec<Step>) -> Result<Self> {
        let mut ids = HashSet::new();
        for m in &members {
            if !ids.insert(m.id.as_str()) {
                return Err(Error::MalformedFiltration(format!("duplicate id `{}`", m.id)));
            }
            for g in &m.gens {
                if g.nvars() != n + 1 {
                    return Err(Error::Ambient {
                        expected: n + 1,
                        found: g.nvars(),
                    });
                }
                if !g.is_linear_form() {
                    return Err(Error::NonLinear(g.to_string()));
                }
            }
        }
        let mut stepped = HashSet::new();
        for s in &steps {
            for id in [&s.ideal, &s.sub, &s.colon] {
                if !ids.contains(id.as_str()) {
                    return Err(Error::MalformedFiltration(format!("step names missing member `{id}`")));
                }
            }
            if !s.gen.is_linear_form() || s.gen.nvars() != n + 1 {
                return Err(Error::NonLinear(s.gen.to_string()));
            }
            if !stepped.insert(s.ideal.as_str()) {
                return Err(Error::MalformedFiltration(format!("two steps for `{}`", s.ideal)));
            }
        }
        if let Some(m) = members.iter().find(|m| !m.gens.is_empty() && !stepped.contains(m.id.as_str())) {
            return Err(Error::MalformedFiltration(format!("member `{}` has no step", m.id)));
        }
        Ok(Filtration { n, members, steps })
    }

    /// Reads the JSON layout; `params` fills named constants in templates.
    pub fn from_json(value: &serde_json::Value, n: usize, params: &HashMap<String, BigRational>) -> Result<Self> {
        let raw: FiltrationJson = serde_json::from_value(value.clone())?;
        if let Some(declared) = raw.n {
            if declared != n {
                return Err(Error::Ambient {
                    expected: n + 1,
                    found: declared + 1,
                });
            }
        }
        if let Some(p) = raw.params.iter().find(|p| !params.contains_key(*p)) {
            return Err(Error::MalformedFiltration(format!("no value for parameter `{p}`")));
        }
        let parse = |s: &str| parse_polynomial_with(s, n + 1, params).and_then(linear);
        let members = raw
            .ideals
            .iter()
            .map(|m| {
                Ok(Member {
                    id: m.id.clone(),
                    gens: m.gens.iter().map(|g| parse(g)).collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let steps = raw
            .steps
            .iter()
            .map(|s| {
                Ok(Step {
                    ideal: s.ideal.clone(),
                    sub: s.sub.clone(),
                    gen: parse(&s.gen)?,
                    colon: s.colon.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Filtration::new(n, members, steps)
    }

    /// Declared parameter names of a template, without instantiating it.
    pub fn template_params(value: &serde_json::Value) -> Result<Vec<String>> {
        let raw: FiltrationJson = serde_json::from_value(value.clone())?;
        Ok(raw.params)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FiltrationJson {
            n: Some(self.n),
            params: Vec::new(),
            ideals: self
                .members
                .iter()
                .map(|m| MemberJson {
                    id: m.id.clone(),
                    gens: m.gens.iter().map(|g| g.to_string()).collect(),
                })
                .collect(),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    ideal: s.ideal.clone(),
                    sub: s.sub.clone(),
                    gen: s.gen.to_string(),
                    colon: s.colon.clone(),
                })
                .collect(),
        })
        .expect("serializable")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn member(&self, id: &str) -> Option<&Member> {
        self.members.iter().find(|m| m.id == id)
    }
}

pub(crate) const FIVE_P6_FILTRATION: &str = include_str!("../../data/five_p6_filtration.json");

/// The bundled 57-member filtration for five lines in `P^6`, at `(a, b)`.
pub fn five_p6_filtration(a: &BigRational, b: &BigRational) -> Result<Filtration> {
    let value: serde_json::Value = serde_json::from_str(FIVE_P6_FILTRATION)?;
    let params = HashMap::from([("a".to_string(), a.clone()), ("b".to_string(), b.clone())]);
    Filtration::from_json(&value, 6, &params)
}

/// `count` parameter pairs: the defaults first, then seeded ratios of
/// integers below `10^6`.
pub fn five_p6_specializations(count: usize, seed: u64) -> Vec<(BigRational, BigRational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let p: i64 = rng.gen_range(2..1_000_000);
        let q: i64 = rng.gen_range(2..1_000_000);
        BigRational::new(BigInt::from(p), BigInt::from(q))
    };
    let mut out = Vec::with_capacity(count);
    if count > 0 {
        out.push(five_p6_default_params());
    }
    while out.len() < count {
        let (a, b) = (draw(), draw());
        if a != b && !a.is_zero() && !b.is_zero() {
            out.push((a, b));
        }
    }
    out
}

/// Outcome of one step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepCheck {
    pub ideal: String,
    pub sub: String,
    pub gen: String,
    pub colon: String,
    /// `J + sub + (gen) = J + ideal`
    pub spans: bool,
    /// `(J + sub) : (J + ideal) = J + colon`
    pub colon_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub ideals: usize,
    pub zero_member: bool,
    pub maximal_member: bool,
    pub steps: Vec<StepCheck>,
    pub failures: Vec<String>,
}

impl FiltrationReport {
    pub fn accepted(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "accepted": self.accepted(),
            "ideals": self.ideals,
            "steps": self.steps.len(),
            "zero_member": self.zero_member,
            "maximal_member": self.maximal_member,
            "failures": self.failures,
            "checks": self.steps,
        })
    }
}

/// Is every form of `target` in the span of `basis`?
fn span_contains(nvars: usize, basis: &[&Polynomial], target: &[&Polynomial]) -> bool {
    let rows: Vec<Vec<BigRational>> = basis.iter().map(|p| p.linear_coefficients()).collect();
    let r = rank(&Rationals, &rows, nvars);
    target.iter().all(|t| {
        let mut with = rows.clone();
        with.push(t.linear_coefficients());
        rank(&Rationals, &with, nvars) == r
    })
}

/// Checks every step of `f` against `R = S/J`, working with the lifts
/// `J + (gens)` in `S`. Equalities of such ideals reduce to their degree-one
/// parts, which contain the linear forms of `J`.
pub fn verify_filtration(j: &Ideal, f: &Filtration) -> Result<FiltrationReport> {
    j.require_homogeneous()?;
    if j.ambient_n() != f.n {
        return Err(Error::Ambient {
            expected: j.nvars(),
            found: f.n + 1,
        });
    }
    let nvars = j.nvars();
    let j_linear: Vec<Polynomial> = j
        .groebner_shared()
        .elements()
        .iter()
        .filter(|g| g.is_linear_form())
        .cloned()
        .collect();
    let lifts: HashMap<&str, Ideal> = f
        .members
        .par_iter()
        .map(|m| {
            let lift = j.with(&m.gens).expect("ambient checked");
            lift.groebner_shared();
            (m.id.as_str(), lift)
        })
        .collect();
    let vars: Vec<Polynomial> = (0..nvars).map(|v| Polynomial::var(nvars, v)).collect();
    let zero_member = f.members.iter().any(|m| m.gens.iter().all(|g| j.contains(g)));
    let maximal_member = f.members.iter().any(|m| vars.iter().all(|v| lifts[m.id.as_str()].contains(v)));

    let checks: Vec<Result<StepCheck>> = f
        .steps
        .par_iter()
        .map(|s| {
            let (ideal, sub) = (f.member(&s.ideal).expect("checked"), f.member(&s.sub).expect("checked"));
            let mut sub_side: Vec<&Polynomial> = j_linear.iter().chain(&sub.gens).collect();
            sub_side.push(&s.gen);
            let ideal_side: Vec<&Polynomial> = j_linear.iter().chain(&ideal.gens).collect();
            let spans = span_contains(nvars, &sub_side, &ideal.gens.iter().collect::<Vec<_>>())
                && span_contains(nvars, &ideal_side, &sub_side);
            let computed = colon_ideal(&lifts[s.sub.as_str()], &lifts[s.ideal.as_str()])?;
            let colon_matches = computed.equals(&lifts[s.colon.as_str()]);
            Ok(StepCheck {
                ideal: s.ideal.clone(),
                sub: s.sub.clone(),
                gen: s.gen.to_string(),
                colon: s.colon.clone(),
                spans,
                colon_matches,
            })
        })
        .collect();
    let steps = checks.into_iter().collect::<Result<Vec<_>>>()?;

    let mut failures = Vec::new();
    if !zero_member {
        failures.push("the zero ideal is not a member".to_string());
    }
    if !maximal_member {
        failures.push("the maximal ideal is not a member".to_string());
    }
    for c in &steps {
        if !c.spans {
            failures.push(format!("{}: {} + ({}) does not give {}", c.ideal, c.sub, c.gen, c.ideal));
        }
        if !c.colon_matches {
            failures.push(format!("{}: {} : {} differs from {}", c.ideal, c.sub, c.ideal, c.colon));
        }
    }
    Ok(FiltrationReport {
        ideals: f.members.len(),
        zero_member,
        maximal_member,
        steps,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Filtration {
        let nvars = n + 1;
        let members = (0..=nvars)
            .map(|k| Member {
                id: format!("c{k}"),
                gens: (0..k).map(|v| Polynomial::var(nvars, v)).collect(),
            })
            .collect();
        let steps = (1..=nvars)
            .map(|k| Step {
                ideal: format!("c{k}"),
                sub: format!("c{}", k - 1),
                gen: Polynomial::var(nvars, k - 1),
                colon: format!("c{}", k - 1),
            })
            .collect();
        Filtration::new(n, members, steps).unwrap()
    }

    #[test]
    fn regular_sequence_chain_is_accepted() {
        let report = verify_filtration(&Ideal::zero(3), &chain(3)).unwrap();
        assert!(report.accepted(), "{:?}", report.failures);
        assert_eq!(report.ideals, 5);
    }

    #[test]
    fn wrong_colon_is_reported() {
        let j = Ideal::parse(2, &["x0*x1"]).unwrap();
        let report = verify_filtration(&j, &chain(2)).unwrap();
        assert!(!report.accepted());
        assert!(report.failures.iter().any(|f| f.starts_with("c1:")));
    }

    #[test]
    fn malformed_input_is_rejected() {
        let bad = serde_json::json!({
            "ideals": [{"id": "z", "gens": []}, {"id": "a", "gens": ["x0^2"]}],
            "steps": []
        });
        assert!(matches!(Filtration::from_json(&bad, 2, &HashMap::new()), Err(Error::NonLinear(_))));
        let missing = serde_json::json!({
            "ideals": [{"id": "z", "gens": []}, {"id": "a", "gens": ["x0"]}],
            "steps": [{"ideal": "a", "sub": "z", "gen": "x0", "colon": "q"}]
        });
        assert!(matches!(
            Filtration::from_json(&missing, 2, &HashMap::new()),
            Err(Error::MalformedFiltration(_))
        ));
        let unstepped = serde_json::json!({
            "ideals": [{"id": "z", "gens": []}, {"id": "a", "gens": ["x0"]}],
            "steps": []
        });
        assert!(Filtration::from_json(&unstepped, 2, &HashMap::new()).is_err());
    }

    #[test]
    fn bundled_template_parses() {
        let (a, b) = five_p6_default_params();
        let f = five_p6_filtration(&a, &b).unwrap();
        assert_eq!(f.members().len(), 57);
        assert_eq!(f.steps().len(), 56);
        let round = Filtration::from_json(&f.to_json(), 6, &HashMap::new()).unwrap();
        assert_eq!(round, f);
    }
}
