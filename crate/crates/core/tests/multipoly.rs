use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use linea_core::hilbert::binom;
use linea_core::multipoly::linalg::{exact_rank, multimodular_rank, rank, Rationals, RankPath};
use linea_core::multipoly::{monomials_of_degree, parse_polynomial, rank_kernel, Monomial, Polynomial, RationalMatrix};

const NVARS: usize = 3;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn poly_strategy() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..3, NVARS), -6i64..=6), 0..5).prop_map(|terms| {
        terms.into_iter().fold(Polynomial::zero(NVARS), |acc, (exps, c)| {
            let t = Polynomial::monomial(NVARS, Monomial::from_exponents(&exps)).scale(&q(c));
            &acc + &t
        })
    })
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, planted_rank: usize) -> Vec<Vec<BigRational>> {
    // product of (rows x r) and (r x cols) factors, so the rank is at most r
    let left: Vec<Vec<BigRational>> = (0..rows)
        .map(|_| (0..planted_rank).map(|_| BigRational::new(rng.gen_range(-50..50).into(), rng.gen_range(1..9).into())).collect())
        .collect();
    let right: Vec<Vec<BigRational>> = (0..planted_rank)
        .map(|_| (0..cols).map(|_| q(rng.gen_range(-50..50))).collect())
        .collect();
    left.iter()
        .map(|l| (0..cols).map(|c| l.iter().zip(&right).map(|(a, r)| a * &r[c]).sum()).collect())
        .collect()
}

#[test]
fn monomial_counts_match_binomials() {
    for n in 0..=6usize {
        for d in 0..=8u32 {
            let count = monomials_of_degree(n, d).len() as u64;
            assert_eq!(binom(n as u64 + d as u64, d as u64), count.into(), "n={n}, d={d}");
        }
    }
    assert_eq!(monomials_of_degree(1, 2).len(), 3);
    assert_eq!(monomials_of_degree(6, 2).len(), 28);
}

#[test]
fn documented_arithmetic() {
    let a = parse_polynomial("x0 + x1", 2).unwrap();
    let b = parse_polynomial("x0 - x1", 2).unwrap();
    assert_eq!(&a * &b, parse_polynomial("x0^2 - x1^2", 2).unwrap());
    let p = parse_polynomial("1/2*x0^2*x3 - x1*x2", 4).unwrap();
    assert_eq!(parse_polynomial(&p.to_string(), 4).unwrap(), p);
    assert_eq!(p.to_string(), parse_polynomial(&p.to_string(), 4).unwrap().to_string());
}

#[test]
fn documented_ranks() {
    let (r, k) = rank_kernel(&RationalMatrix::identity(3));
    assert_eq!((r, k.len()), (3, 0));
    let (r, k) = rank_kernel(&RationalMatrix::zeros(2, 5));
    assert_eq!((r, k.len()), (0, 5));
}

#[test]
fn multimodular_rank_agrees_with_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for planted in [20, 12, 3] {
        let m = random_matrix(&mut rng, 20, 30, planted);
        let (r, path) = multimodular_rank(&m, 30);
        assert!(matches!(path, RankPath::MultiModular { .. }));
        assert_eq!(r, exact_rank(&m, 30));
        assert_eq!(r, rank(&Rationals, &m, 30));
        assert!(r <= planted);
    }
}

#[test]
fn rank_of_transpose_and_shuffles() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let (rows, cols) = (rng.gen_range(1..10), rng.gen_range(1..10));
        let planted = rng.gen_range(0..=rows.min(cols));
        let mut m = random_matrix(&mut rng, rows, cols, planted);
        let r = rank(&Rationals, &m, cols);
        let t = RationalMatrix::from_rows(cols, m.clone()).transpose();
        assert_eq!(rank(&Rationals, &t.to_rows(), rows), r);
        m.shuffle(&mut rng);
        assert_eq!(rank(&Rationals, &m, cols), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
    }

    #[test]
    fn printing_round_trips(a in poly_strategy()) {
        prop_assert_eq!(parse_polynomial(&a.to_string(), NVARS).unwrap(), a);
    }
}
