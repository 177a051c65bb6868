use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use linea_core::exactnum::{reciprocal_series, CoefficientSequence, RationalFunction1};
use linea_core::hilbert::hh_series;

fn binomial_signed(d: u32) -> Vec<BigInt> {
    // coefficients of (1 - t)^d
    let mut c = vec![BigInt::one()];
    for _ in 0..d {
        let mut next = vec![BigInt::zero(); c.len() + 1];
        for (i, v) in c.iter().enumerate() {
            next[i] += v;
            next[i + 1] -= v;
        }
        c = next;
    }
    c
}

fn convolve(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    (0..len)
        .map(|k| (0..=k).filter(|&i| i < a.len() && k - i < b.len()).map(|i| &a[i] * &b[k - i]).sum())
        .collect()
}

fn numerator_strategy() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-20i64..=20, 1..6)
}

#[test]
fn documented_expansions() {
    let f = RationalFunction1::from_i64(&[1], 1);
    assert_eq!(f.series_expand(3), CoefficientSequence(vec![1.into(), 1.into(), 1.into(), 1.into()]));
    let g = RationalFunction1::from_i64(&[1, 1], 0);
    assert_eq!(g.series_expand(3).to_i64(), vec![1, 1, 0, 0]);
    let h = RationalFunction1::from_i64(&[1, 5, 2, -3], 2);
    assert_eq!(h.series_expand(3).to_i64(), vec![1, 7, 15, 20]);
}

#[test]
fn reciprocal_for_six_lines() {
    let h = hh_series(6, 6).unwrap();
    let r = reciprocal_series(&h, 20).unwrap();
    assert_eq!(r.to_i64()[..5], [1, 7, 31, 115, 385]);
    assert_eq!(r.first_negative(), Some(12));
    let field = RationalFunction1::from_i64(&[1], 0);
    assert_eq!(reciprocal_series(&field, 4).unwrap().to_i64(), vec![1, 0, 0, 0, 0]);
}

#[test]
fn first_negative_examples() {
    let seq = |v: &[i64]| CoefficientSequence(v.iter().map(|&x| BigInt::from(x)).collect());
    assert_eq!(seq(&[1, 1, 1]).first_negative(), None);
    assert_eq!(seq(&[1, 0, -2]).first_negative(), Some(2));
}

proptest! {
    #[test]
    fn expansion_times_denominator_is_numerator(num in numerator_strategy(), d in 0u32..4, n in 0usize..50) {
        let f = RationalFunction1::from_i64(&num, d);
        let series = f.series_expand(n);
        prop_assert_eq!(series.as_slice().len(), n + 1);
        let back = convolve(series.as_slice(), &binomial_signed(f.denom_power()), n + 1);
        let mut expected: Vec<BigInt> = f.numerator().to_vec();
        expected.resize(n + 1, BigInt::zero());
        expected.truncate(n + 1);
        prop_assert_eq!(back, expected);
    }

    #[test]
    fn reciprocal_inverts_h_of_minus_t(tail in prop::collection::vec(-9i64..=9, 0..5), d in 0u32..3, n in 0usize..30) {
        let mut num = vec![1i64];
        num.extend(tail);
        let h = RationalFunction1::from_i64(&num, d);
        let r = reciprocal_series(&h, n).unwrap();
        let h_minus: Vec<BigInt> = h
            .series_expand(n)
            .as_slice()
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c })
            .collect();
        let product = convolve(r.as_slice(), &h_minus, n + 1);
        let mut unit = vec![BigInt::zero(); n + 1];
        unit[0] = BigInt::one();
        prop_assert_eq!(product, unit);
    }

    #[test]
    fn one_minus_t_cancels(num in numerator_strategy(), d in 0u32..4) {
        let f = RationalFunction1::from_i64(&num, d);
        let mut times: Vec<i64> = vec![0; num.len() + 1];
        for (i, c) in num.iter().enumerate() {
            times[i] += c;
            times[i + 1] -= c;
        }
        prop_assert_eq!(RationalFunction1::from_i64(&times, d + 1), f);
    }

    #[test]
    fn display_parses_back(num in numerator_strategy(), d in 0u32..4) {
        let f = RationalFunction1::from_i64(&num, d);
        let back: RationalFunction1 = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }
}
