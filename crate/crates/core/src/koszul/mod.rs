//! Deciding the Koszul property for generic line arrangements: the
//! classification rules, the Fröberg necessary condition, Koszul filtrations
//! and a checker for them.

mod construct;
mod filtration;

pub use construct::{
    candidate_filtrations, construct_filtration_thm43, hilbert_claims_check, monomial_filtration, thm43_band,
    ClaimCheck, ClaimsReport, Construction,
};
pub use filtration::{
    five_p6_filtration, five_p6_specializations, verify_filtration, Filtration, FiltrationReport, Member, Step,
    StepCheck,
};

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::reciprocal_series;
use crate::hilbert::{hh_series, regularity_alpha};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Koszul,
    NotKoszul,
    Unknown,
}

/// A verdict and the result it rests on; `Unknown` carries none.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
}

impl Classification {
    fn koszul(reason: &'static str) -> Self {
        Classification {
            verdict: Verdict::Koszul,
            reason: Some(reason),
        }
    }

    fn not_koszul(reason: &'static str) -> Self {
        Classification {
            verdict: Verdict::NotKoszul,
            reason: Some(reason),
        }
    }

    fn unknown() -> Self {
        Classification {
            verdict: Verdict::Unknown,
            reason: None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

fn check_mn(m: u64, n: u64) -> Result<()> {
    if m == 0 || n < 2 {
        return Err(Error::OutOfRange(format!("need m >= 1 and n >= 2, got m={m}, n={n}")));
    }
    Ok(())
}

/// `m > (3(n^2 + 10n + 13) + sqrt(3(n-1)^3(3n+5))) / 72`, decided in
/// integers: with `A = 72m - 3(n^2 + 10n + 13)`, `A > 0` and
/// `A^2 > 3(n-1)^3(3n+5)`.
pub fn threshold_exceeded(m: u64, n: u64) -> bool {
    let (m, n) = (BigInt::from(m), BigInt::from(n));
    let a: BigInt = &m * 72 - (&n * &n + &n * 10 + 13) * 3;
    a.is_positive() && &a * &a > threshold_radicand(&n)
}

fn threshold_radicand(n: &BigInt) -> BigInt {
    let nm1 = n - 1;
    &nm1 * &nm1 * &nm1 * (n * 3 + 5) * 3
}

/// The same comparison against the bound evaluated in fixed point with
/// `bits` fractional bits; an independent check of [`threshold_exceeded`].
pub fn threshold_exceeded_fixed(m: u64, n: u64, bits: u32) -> bool {
    let nb = BigInt::from(n);
    let scale = BigInt::from(1) << bits;
    let root = (threshold_radicand(&nb) << (2 * bits)).sqrt();
    let bound = (&nb * &nb + &nb * 10 + 13) * 3 * &scale + root;
    BigInt::from(m) * 72 * scale > bound
}

/// `-m(108m^2 - 9m(n^2 + 10n + 13) + 4(n + 2)^3)`.
pub fn discriminant(m: i64, n: i64) -> BigInt {
    let (m, n) = (BigInt::from(m), BigInt::from(n));
    let np2 = &n + 2;
    let inner: BigInt = &m * &m * 108 - &m * (&n * &n + &n * 10 + 13) * 9 + &np2 * &np2 * &np2 * 4;
    -(m * inner)
}

/// First index `<= terms` at which `1 / H_R(-t)` has a negative coefficient.
/// A Koszul `R` has none.
pub fn froberg_probe(m: u64, n: u64, terms: usize) -> Result<Option<usize>> {
    let h = hh_series(m, n)?;
    Ok(reciprocal_series(&h, terms)?.first_negative())
}

/// Every rule that applies to `(m, n)`, in precedence order.
pub fn applicable_rules(m: u64, n: u64) -> Result<Vec<Classification>> {
    check_mn(m, n)?;
    let mut out = Vec::new();
    if n == 2 {
        // a single form of degree m
        out.push(if m <= 2 {
            Classification::koszul("hypersurface")
        } else {
            Classification::not_koszul("hypersurface")
        });
        return Ok(out);
    }
    if m == 1 {
        out.push(Classification::koszul("linear ideal"));
    }
    if 2 * m <= n + 1 {
        out.push(Classification::koszul("Prop 4.1"));
    }
    if m.is_multiple_of(2) && m < n {
        out.push(Classification::koszul("Thm 4.3"));
    }
    if m % 2 == 1 && m + 2 <= n {
        out.push(Classification::koszul("Thm 4.3"));
    }
    if (m, n) == (5, 6) {
        out.push(Classification::koszul("Prop 4.4"));
    }
    if (m, n) == (3, 4) {
        out.push(Classification::not_koszul("Prop 5.3"));
    }
    if threshold_exceeded(m, n) {
        out.push(Classification::not_koszul("Thm 5.2"));
    }
    if regularity_alpha(m, n)? >= 3 {
        out.push(Classification::not_koszul("non-quadratic"));
    }
    Ok(out)
}

/// The first applicable rule, or `Unknown`.
pub fn classify(m: u64, n: u64) -> Result<Classification> {
    Ok(applicable_rules(m, n)?.into_iter().next().unwrap_or_else(Classification::unknown))
}

/// Verdicts for `1 <= m <= max_m`, `2 <= n <= max_n`, row by row in `m`.
pub fn classification_grid(max_m: u64, max_n: u64) -> Result<Vec<(u64, u64, Classification)>> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        for n in 2..=max_n {
            out.push((m, n, classify(m, n)?));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_values() {
        assert!(threshold_exceeded(5, 5));
        assert!(threshold_exceeded(6, 6));
        assert!(!threshold_exceeded(4, 5));
        assert!(!threshold_exceeded(8, 8));
    }

    #[test]
    fn discriminant_values() {
        assert_eq!(discriminant(5, 5), BigInt::from(-560));
        assert_eq!(discriminant(1, 5), BigInt::from(-688));
        for m in 1..20 {
            assert_eq!(discriminant(m, 1), BigInt::from(-108 * m * (m - 1) * (m - 1)));
        }
    }

    #[test]
    fn classify_examples() {
        let c = classify(3, 4).unwrap();
        assert_eq!(c.to_json().to_string(), r#"{"verdict":"NotKoszul","reason":"Prop 5.3"}"#);
        assert_eq!(classify(5, 6).unwrap().reason, Some("Prop 4.4"));
        assert_eq!(classify(7, 8).unwrap().to_json().to_string(), r#"{"verdict":"Unknown"}"#);
        assert_eq!(classify(2, 2).unwrap().verdict, Verdict::Koszul);
        assert_eq!(classify(3, 2).unwrap().verdict, Verdict::NotKoszul);
        assert_eq!(classify(4, 6).unwrap().reason, Some("Thm 4.3"));
        assert!(classify(0, 4).is_err());
    }

    #[test]
    fn froberg_examples() {
        assert_eq!(froberg_probe(1, 5, 40).unwrap(), None);
        assert_eq!(froberg_probe(2, 3, 20).unwrap(), None);
        assert_eq!(froberg_probe(6, 6, 20).unwrap(), Some(12));
    }
}
