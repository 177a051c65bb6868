use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::json;

use linea_core::arrangements::{defining_ideal, named, NamedId};
use linea_core::error::Error;
use linea_core::ideal_ops::{minimal_generators_up_to, Ideal};
use linea_core::koszul::{
    applicable_rules, candidate_filtrations, classification_grid, classify, construct_filtration_thm43, discriminant,
    thm43_band, threshold_exceeded, verify_filtration, Filtration, Verdict,
};

fn filtration(n: usize, value: serde_json::Value) -> Filtration {
    Filtration::from_json(&value, n, &HashMap::new()).unwrap()
}

#[test]
fn rules_never_disagree() {
    for m in 1..=12 {
        for n in 2..=12 {
            let rules = applicable_rules(m, n).unwrap();
            let koszul = rules.iter().any(|c| c.verdict == Verdict::Koszul);
            let not = rules.iter().any(|c| c.verdict == Verdict::NotKoszul);
            assert!(!(koszul && not), "m={m} n={n}: {rules:?}");
            let first = classify(m, n).unwrap();
            match rules.first() {
                Some(c) => assert_eq!(&first, c),
                None => assert_eq!(first.verdict, Verdict::Unknown),
            }
        }
    }
    assert_eq!(classification_grid(12, 12).unwrap().len(), 12 * 11);
}

#[test]
fn documented_verdicts() {
    assert_eq!(classify(3, 4).unwrap().to_json(), json!({"verdict": "NotKoszul", "reason": "Prop 5.3"}));
    assert_eq!(classify(5, 6).unwrap().verdict, Verdict::Koszul);
    assert_eq!(classify(1, 7).unwrap().verdict, Verdict::Koszul);
    assert_eq!(classify(2, 2).unwrap().verdict, Verdict::Koszul);
    assert_eq!(classify(3, 2).unwrap().verdict, Verdict::NotKoszul);
    assert_eq!(classify(6, 6).unwrap().verdict, Verdict::NotKoszul);
    assert_eq!(classify(7, 7).unwrap().verdict, Verdict::Unknown);
    assert!(classify(0, 4).is_err());
}

#[test]
fn discriminant_is_negative_past_the_threshold() {
    for n in 3..=40i64 {
        for m in 1..=200i64 {
            let alpha = linea_core::hilbert::regularity_alpha(m as u64, n as u64).unwrap();
            if threshold_exceeded(m as u64, n as u64) && alpha == 2 {
                assert!(discriminant(m, n).is_negative(), "m={m} n={n}");
            }
        }
    }
    assert_eq!(discriminant(0, 5), BigInt::from(0));
}

#[test]
fn band_is_where_the_split_layout_applies() {
    for m in 3..=8 {
        for n in 3..=16 {
            let expected = n >= m + 1 + m % 2 && n <= 2 * (m - 1);
            assert_eq!(thm43_band(m, n), expected, "m={m} n={n}");
        }
    }
}

#[test]
fn regular_sequence_chain() {
    // S/(x0^2, x1^2): x0 kills itself, x1 is a zero divisor mod x0, x2 is regular
    let j = Ideal::parse(2, &["x0^2", "x1^2"]).unwrap();
    let f = filtration(
        2,
        json!({
            "ideals": [
                {"id": "0", "gens": []},
                {"id": "a", "gens": ["x0"]},
                {"id": "ab", "gens": ["x0", "x1"]},
                {"id": "m", "gens": ["x0", "x1", "x2"]}
            ],
            "steps": [
                {"ideal": "a", "sub": "0", "gen": "x0", "colon": "a"},
                {"ideal": "ab", "sub": "a", "gen": "x1", "colon": "ab"},
                {"ideal": "m", "sub": "ab", "gen": "x2", "colon": "ab"}
            ]
        }),
    );
    assert!(verify_filtration(&j, &f).unwrap().accepted());

    // over the polynomial ring every colon is the previous ideal
    let zero = Ideal::new(2, vec![]).unwrap();
    let flat = filtration(
        2,
        json!({
            "ideals": [
                {"id": "0", "gens": []},
                {"id": "a", "gens": ["x0"]},
                {"id": "ab", "gens": ["x0", "x1"]},
                {"id": "m", "gens": ["x0", "x1", "x2"]}
            ],
            "steps": [
                {"ideal": "a", "sub": "0", "gen": "x0", "colon": "0"},
                {"ideal": "ab", "sub": "a", "gen": "x1", "colon": "a"},
                {"ideal": "m", "sub": "ab", "gen": "x2", "colon": "ab"}
            ]
        }),
    );
    assert!(verify_filtration(&zero, &flat).unwrap().accepted());
    let report = verify_filtration(&j, &flat).unwrap();
    assert!(!report.accepted());
    assert!(report.failures.iter().any(|f| f.starts_with("a:")));
}

#[test]
fn colon_targets_must_be_members() {
    let value = json!({
        "ideals": [{"id": "0", "gens": []}, {"id": "m", "gens": ["x0", "x1"]}],
        "steps": [{"ideal": "m", "sub": "0", "gen": "x0", "colon": "q"}]
    });
    assert!(matches!(
        Filtration::from_json(&value, 1, &HashMap::new()),
        Err(Error::MalformedFiltration(_))
    ));
}

#[test]
fn constructed_filtration_for_four_lines_in_p6() {
    let c = construct_filtration_thm43(4, 6, 5).unwrap();
    assert_eq!(c.route, "Thm 4.3");
    let report = verify_filtration(&c.ideal, &c.filtration).unwrap();
    assert!(report.accepted(), "{:?}", report.failures);
    for s in c.filtration.steps() {
        assert!(c.filtration.member(&s.colon).is_some());
        assert!(c.filtration.member(&s.sub).is_some());
    }
    assert_eq!(c.ideal, defining_ideal(&c.arrangement).unwrap());
}

#[test]
fn three_lines_in_p4_resist_filtrations() {
    let j = defining_ideal(&named(&NamedId::ThreeP4).unwrap()).unwrap();
    let (gens, _) = minimal_generators_up_to(&j, 3).unwrap();
    assert!(gens[&3] >= 1);
    assert_eq!(classify(3, 4).unwrap().verdict, Verdict::NotKoszul);
    for f in candidate_filtrations(&j, 6, 2).unwrap() {
        assert!(!verify_filtration(&j, &f).unwrap().accepted());
    }
}
