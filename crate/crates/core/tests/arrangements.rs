use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use linea_core::arrangements::{
    defining_ideal, general_position_check, genericity_certificate, named, random_generic, split_layout, staircase,
    Line, LineArrangement, NamedId, Provenance,
};
use linea_core::hilbert::{hilbert_values_gb, regularity_alpha};
use linea_core::multipoly::linalg::{rank, Rationals};

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn check_lines(a: &LineArrangement) {
    let nvars = a.n() + 1;
    for line in a.lines() {
        let rows: Vec<Vec<BigRational>> = line.forms().iter().map(|f| f.linear_coefficients()).collect();
        assert_eq!(rows.len(), a.n() - 1);
        assert_eq!(rank(&Rationals, &rows, nvars), a.n() - 1);
        let [p, r] = line.points().unwrap();
        for f in line.forms() {
            assert!(f.evaluate(p).is_zero() && f.evaluate(r).is_zero());
        }
    }
}

#[test]
fn forms_cut_out_their_points() {
    for (m, n) in [(1, 3), (3, 4), (5, 6), (6, 8)] {
        check_lines(&random_generic(m, n, 7).unwrap());
    }
    check_lines(&staircase(3, 6).unwrap());
    for id in ["three_p4", "four_p3_special", "five_p6"] {
        check_lines(&named(&NamedId::parse(id).unwrap()).unwrap());
    }
    let (split, coords) = split_layout(2, 2, 5, 3).unwrap();
    check_lines(&split);
    assert_eq!(coords.len(), 6);
}

#[test]
fn generation_is_deterministic() {
    assert_eq!(random_generic(4, 5, 21).unwrap(), random_generic(4, 5, 21).unwrap());
    assert_ne!(random_generic(4, 5, 21).unwrap(), random_generic(4, 5, 22).unwrap());
    assert_eq!(random_generic(2, 3, 9).unwrap().provenance(), &Provenance::Generic { seed: 9 });
    let a = random_generic(3, 4, 5).unwrap();
    assert_eq!(LineArrangement::from_json(&a.to_json()).unwrap(), a);
}

#[test]
fn parameters_are_range_checked() {
    assert!(random_generic(0, 4, 1).is_err());
    assert!(random_generic(2, 2, 1).is_err());
    assert!(random_generic(2, 15, 1).is_err());
    assert!(staircase(3, 4).is_err());
    assert!(NamedId::parse("seven_p2").is_err());
}

#[test]
fn staircase_ideals_are_monomial() {
    for (m, n) in [(1, 3), (2, 3), (2, 5), (3, 5), (3, 6)] {
        let j = defining_ideal(&staircase(m, n).unwrap()).unwrap();
        for g in j.generators() {
            assert_eq!(g.terms().len(), 1, "{g}");
            assert!(g.degree().unwrap() <= 2, "{g}");
        }
    }
}

#[test]
fn seeded_arrangements_are_certified_generic() {
    for (m, n) in [(2, 3), (3, 4), (4, 5), (4, 6)] {
        let alpha = regularity_alpha(m as u64, n as u64).unwrap() as u32;
        for seed in 1..=3 {
            let a = random_generic(m, n, seed).unwrap();
            assert!(general_position_check(&a).unwrap(), "m={m} n={n} seed={seed}");
            assert!(genericity_certificate(&a, alpha + 1).unwrap(), "m={m} n={n} seed={seed}");
        }
    }
}

#[test]
fn four_special_lines_are_not_generic() {
    let a = named(&NamedId::FourP3Special).unwrap();
    assert!(general_position_check(&a).unwrap());
    assert!(!genericity_certificate(&a, 3).unwrap());
    assert_eq!(hilbert_values_gb(&defining_ideal(&a).unwrap(), 2), vec![1, 4, 9]);

    let generic = random_generic(3, 5, 2).unwrap();
    assert!(general_position_check(&generic).unwrap());
    assert!(genericity_certificate(&generic, 3).unwrap());
}

#[test]
fn repeated_line_is_not_in_general_position() {
    let line = Line::through(vec![q(1), q(0), q(2), q(0)], vec![q(0), q(1), q(0), q(3)]).unwrap();
    let a = LineArrangement::new(3, vec![line.clone(), line], Provenance::Given).unwrap();
    assert!(!general_position_check(&a).unwrap());
}

#[test]
fn meeting_lines_are_not_in_general_position() {
    // both lines pass through (1:0:0:0)
    let a = Line::through(vec![q(1), q(0), q(0), q(0)], vec![q(0), q(1), q(0), q(0)]).unwrap();
    let b = Line::through(vec![q(1), q(0), q(0), q(0)], vec![q(0), q(0), q(1), q(1)]).unwrap();
    let arrangement = LineArrangement::new(3, vec![a, b], Provenance::Given).unwrap();
    assert!(!general_position_check(&arrangement).unwrap());
    assert!(!genericity_certificate(&arrangement, 2).unwrap());
}
