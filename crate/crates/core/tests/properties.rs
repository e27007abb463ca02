use std::collections::BTreeSet;

use proptest::prelude::*;

use paramat::formula::{random_formula, BinOp};
use paramat::para::{entails_by_definition, is_para_consistent, ParaTheory};
use paramat::semantics::{classify, is_consistent, is_tautology, Classification, Domain};
use paramat::{
    builtin, entails, logic_entails, para_entails, parse, Formula, FormulaSet, LogicSpec, Matrix,
};

fn letter() -> impl Strategy<Value = Formula> {
    prop_oneof![Just("p"), Just("q"), Just("r")].prop_map(Formula::letter)
}

fn formula() -> impl Strategy<Value = Formula> {
    letter().prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            (
                prop_oneof![Just(BinOp::Or), Just(BinOp::And), Just(BinOp::Imp)],
                inner.clone(),
                inner
            )
                .prop_map(|(op, a, b)| Formula::binary(op, a, b)),
        ]
    })
}

fn premises(max: usize) -> impl Strategy<Value = FormulaSet> {
    prop::collection::vec(formula(), 0..=max).prop_map(|v| v.into_iter().collect())
}

fn matrix() -> impl Strategy<Value = Matrix> {
    prop_oneof![Just("l3"), Just("g3"), Just("k3"), Just("cl2")].prop_map(|n| builtin(n).unwrap())
}

fn three_valued() -> impl Strategy<Value = Matrix> {
    prop_oneof![Just("l3"), Just("g3"), Just("k3")].prop_map(|n| builtin(n).unwrap())
}

fn one(f: &Formula) -> FormulaSet {
    std::iter::once(f.clone()).collect()
}

/// Smallest-size consistent subset entailing `alpha`, by brute force over
/// every subset.
fn brute_force(m: &Matrix, gamma: &FormulaSet, alpha: &Formula) -> Option<usize> {
    (0u64..1 << gamma.len())
        .map(|mask| gamma.select(mask))
        .filter(|s| is_consistent(m, s) && entails(m, s, alpha).holds)
        .map(|s| s.len())
        .min()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn render_parse_round_trip(f in formula()) {
        prop_assert_eq!(parse(&f.render()).unwrap(), f);
    }

    #[test]
    fn random_formulas_respect_depth(seed in any::<u64>(), depth in 0usize..5) {
        let f = random_formula(["p", "q"], depth, seed);
        prop_assert!(f.depth() <= depth);
    }

    #[test]
    fn reflexivity(m in matrix(), gamma in premises(4), pick in any::<prop::sample::Index>()) {
        prop_assume!(!gamma.is_empty());
        let alpha = &gamma.as_slice()[pick.index(gamma.len())];
        prop_assert!(entails(&m, &gamma, alpha).holds);
    }

    #[test]
    fn monotonicity(m in matrix(), gamma in premises(3), extra in premises(3), alpha in formula()) {
        if entails(&m, &gamma, &alpha).holds {
            prop_assert!(entails(&m, &gamma.union(&extra), &alpha).holds);
        }
    }

    #[test]
    fn transitivity(m in matrix(), gamma in premises(3), delta in premises(3), alpha in formula()) {
        let all = delta.iter().all(|d| entails(&m, &gamma, d).holds);
        if all && entails(&m, &delta, &alpha).holds {
            prop_assert!(entails(&m, &gamma, &alpha).holds);
        }
    }

    #[test]
    fn fresh_letters_are_irrelevant(m in matrix(), gamma in premises(3), alpha in formula()) {
        let mut letters: BTreeSet<String> = gamma.letters();
        letters.extend(alpha.letters());
        let decide = |domain: Domain| {
            domain.models_of_set(&gamma).unwrap().is_subset(&domain.models(&alpha).unwrap())
        };
        let narrow = decide(Domain::new(&m, letters.clone()));
        letters.insert("z".to_string());
        prop_assert_eq!(narrow, decide(Domain::new(&m, letters)));
        prop_assert_eq!(narrow, entails(&m, &gamma, &alpha).holds);
    }

    #[test]
    fn para_matches_brute_force(m in three_valued(), gamma in premises(6), alpha in formula()) {
        let got = para_entails(&m, &gamma, &alpha).unwrap();
        let expected = brute_force(&m, &gamma, &alpha);
        prop_assert_eq!(got.holds, expected.is_some());
        if let Some(w) = got.witness_subset {
            prop_assert!(w.is_subset(&gamma));
            prop_assert!(is_consistent(&m, &w));
            prop_assert!(entails(&m, &w, &alpha).holds);
            prop_assert_eq!(Some(w.len()), expected);
        }
    }

    #[test]
    fn backtracking_matches_definition(m in three_valued(), gamma in prop::collection::vec(formula(), 11..14), alpha in formula()) {
        let gamma: FormulaSet = gamma.into_iter().collect();
        let mut letters: BTreeSet<String> = gamma.letters();
        letters.extend(alpha.letters());
        let theory = ParaTheory::with_bound(&m, &gamma, letters, 16).unwrap();
        prop_assert_eq!(theory.entails(&alpha), entails_by_definition(&m, &gamma, &alpha, 1));
    }

    #[test]
    fn para_reduces_to_base_on_consistent_sets(m in matrix(), gamma in premises(4), alpha in formula()) {
        prop_assume!(is_consistent(&m, &gamma));
        prop_assert_eq!(para_entails(&m, &gamma, &alpha).unwrap().holds, entails(&m, &gamma, &alpha).holds);
    }

    #[test]
    fn para_monotonicity(m in three_valued(), gamma in premises(3), extra in premises(3), alpha in formula()) {
        if para_entails(&m, &gamma, &alpha).unwrap().holds {
            prop_assert!(para_entails(&m, &gamma.union(&extra), &alpha).unwrap().holds);
        }
    }

    #[test]
    fn para_consistency_is_universal(m in three_valued(), gamma in premises(5)) {
        prop_assert!(is_para_consistent(&m, &gamma).unwrap());
    }

    #[test]
    fn second_iterate_agrees(m in three_valued(), gamma in premises(4), alpha in formula()) {
        let once = logic_entails(&LogicSpec::new(m.clone(), 1), &gamma, &alpha).unwrap();
        let twice = logic_entails(&LogicSpec::new(m, 2), &gamma, &alpha).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn l3_contradictions_never_para_entailed(gamma in premises(4), beta in formula()) {
        let l3 = builtin("l3").unwrap();
        if classify(&l3, &beta) == Classification::Contradiction {
            prop_assert!(!para_entails(&l3, &gamma, &beta).unwrap().holds);
        }
    }

    #[test]
    fn l3_tautologies_propagate(beta in formula(), gamma_f in formula(), others in premises(3)) {
        let l3 = builtin("l3").unwrap();
        if is_tautology(&l3, &beta) && para_entails(&l3, &one(&beta), &gamma_f).unwrap().holds {
            prop_assert!(is_tautology(&l3, &gamma_f));
            prop_assert!(para_entails(&l3, &others, &gamma_f).unwrap().holds);
        }
    }

    #[test]
    fn l3_singleton_para_entailment(alpha in formula(), beta in formula()) {
        let l3 = builtin("l3").unwrap();
        let a = one(&alpha);
        if para_entails(&l3, &a, &beta).unwrap().holds {
            prop_assert!(is_tautology(&l3, &beta) || (is_consistent(&l3, &a) && entails(&l3, &a, &beta).holds));
        }
    }

    #[test]
    fn star_property_separates_letter_and_negation(m in matrix()) {
        prop_assert!(m.has_star_property());
        prop_assert!(!is_consistent(&m, &paramat::parse_set("p, ~p").unwrap()));
    }
}

fn classical(f: &Formula, v: &dyn Fn(&str) -> bool) -> bool {
    match f {
        Formula::Letter(l) => v(l),
        Formula::Neg(a) => !classical(a, v),
        Formula::Or(a, b) => classical(a, v) || classical(b, v),
        Formula::And(a, b) => classical(a, v) && classical(b, v),
        Formula::Imp(a, b) => !classical(a, v) || classical(b, v),
    }
}

proptest! {
    #[test]
    fn cl2_agrees_with_boolean_tables(gamma in premises(3), alpha in formula()) {
        let cl2 = builtin("cl2").unwrap();
        let expected = (0..8u8).all(|bits| {
            let v = |l: &str| bits >> ["p", "q", "r"].iter().position(|x| *x == l).unwrap() & 1 == 1;
            !gamma.iter().all(|g| classical(g, &v)) || classical(&alpha, &v)
        });
        prop_assert_eq!(entails(&cl2, &gamma, &alpha).holds, expected);
    }
}
