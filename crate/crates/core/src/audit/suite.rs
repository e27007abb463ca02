//! Stored counterexamples and instances for L3, G3 and K3, replayed
//! against the semantics.

use serde::{Deserialize, Serialize};

use super::{check_property, Budget, Direction, Outcome, PropertyId, Witness};
use crate::formula::{enumerate_formulas, parse, parse_set, Formula, FormulaSet};
use crate::matrix::{builtin, Matrix, Value};
use crate::para::{consistent_subsets, logic_entails, maximal_consistent_subsets, LogicSpec};
use crate::semantics::{self, classify, Classification, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub name: String,
    pub claim: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// Name of the built-in whose stored witnesses were replayed, if the
    /// matrix is one.
    pub suite: Option<String>,
    pub entries: Vec<SuiteEntry>,
}

impl WitnessReport {
    pub fn passed(&self) -> usize {
        self.entries.iter().filter(|e| e.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn entry(&self, name: &str) -> Option<&SuiteEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn f(s: &str) -> Formula {
    parse(s).expect("well-formed")
}

fn set(s: &str) -> FormulaSet {
    parse_set(s).expect("well-formed")
}

struct Suite<'m> {
    m: &'m Matrix,
    prefix: &'static str,
    entries: Vec<SuiteEntry>,
}

impl<'m> Suite<'m> {
    fn add(&mut self, name: &str, claim: &str, passed: bool) {
        self.entries.push(SuiteEntry {
            name: format!("{}.{name}", self.prefix),
            claim: claim.to_string(),
            passed,
        });
    }

    fn base(&self) -> LogicSpec {
        LogicSpec::base(self.m.clone())
    }

    fn para(&self) -> LogicSpec {
        LogicSpec::para(self.m.clone())
    }

    fn entails(&self, gamma: &str, alpha: &str) -> bool {
        semantics::entails(self.m, &set(gamma), &f(alpha)).holds
    }

    fn para_entails(&self, gamma: &str, alpha: &str) -> bool {
        logic_entails(&self.para(), &set(gamma), &f(alpha)).expect("small")
    }

    fn witness(&self, spec: &LogicSpec, w: Witness) -> bool {
        w.replay(spec)
    }

    fn sampled(&self, spec: &LogicSpec, property: PropertyId) -> bool {
        let budget = Budget {
            samples: 200,
            ..Budget::default()
        };
        check_property(spec, property, &budget).outcome == Outcome::Holds
    }
}

/// Replays the stored witnesses of whichever of L3, G3, K3 has the same
/// tables as the logic's matrix. Other matrices get an empty report.
pub fn verify_witness_suite(logic: &LogicSpec) -> WitnessReport {
    let m = &logic.matrix;
    let which = ["l3", "g3", "k3"]
        .into_iter()
        .find(|name| builtin(name).is_ok_and(|b| b.same_tables(m)));
    let Some(name) = which else {
        return WitnessReport {
            suite: None,
            entries: Vec::new(),
        };
    };
    let mut s = Suite {
        m,
        prefix: name,
        entries: Vec::new(),
    };
    common(&mut s);
    match name {
        "l3" => l3(&mut s),
        "g3" => g3(&mut s),
        _ => k3(&mut s),
    }
    WitnessReport {
        suite: Some(name.to_string()),
        entries: s.entries,
    }
}

fn common(s: &mut Suite) {
    s.add(
        "explosion",
        "{p, ~p} has no models and entails q",
        semantics::models(s.m, &set("p, ~p"), ["p", "q"]).is_ok_and(|v| v.is_empty())
            && s.entails("p, ~p", "q"),
    );
    s.add(
        "para_no_explosion",
        "{p, ~p} |/=P q",
        !s.para_entails("p, ~p", "q"),
    );
    s.add(
        "para_disjunction",
        "{p, ~p} |=P p | q",
        s.para_entails("p, ~p", "p | q"),
    );
    s.add(
        "para_negation",
        "{p, ~p} |=P ~p",
        s.para_entails("p, ~p", "~p"),
    );
    s.add(
        "disjunctive_syllogism",
        "{p | q, ~p} |= q",
        s.entails("p | q, ~p", "q"),
    );
    s.add(
        "para_transitivity_failure",
        "{p, ~p} |=P p | q and ~p, {p | q, ~p} |=P q, {p, ~p} |/=P q",
        s.witness(
            &s.para(),
            Witness::Transitivity {
                premises: set("p, ~p"),
                intermediate: set("p | q, ~p"),
                formula: f("q"),
            },
        ),
    );
    s.add(
        "maximal_subsets",
        "the maximal consistent subsets of {p, ~p} are {p} and {~p}",
        maximal_consistent_subsets(s.m, &set("p, ~p")).is_ok_and(|v| v == [set("p"), set("~p")]),
    );
    s.add(
        "para_modus_ponens_failure",
        "{p, ~p & (p -> q)} |=P p and p -> q but not q",
        s.witness(
            &s.para(),
            Witness::ModusPonens {
                premises: set("p, ~p & (p -> q)"),
                antecedent: f("p"),
                consequent: f("q"),
            },
        ),
    );
}

fn l3(s: &mut Suite) {
    let empty = semantics::models(s.m, &set("~(p -> p)"), ["p"]).is_ok_and(|v| v.is_empty());
    s.add(
        "contradiction_no_models",
        "Mod({~(p -> p)}) is empty",
        empty,
    );
    s.add(
        "contradiction_class",
        "~(p -> p) is a contradiction, p & ~p only unsatisfiable",
        classify(s.m, &f("~(p -> p)")) == Classification::Contradiction
            && classify(s.m, &f("p & ~p")) == Classification::UnsatisfiableNondegenerate,
    );
    s.add(
        "para_inclusion_failure",
        "{~(p -> p)} |/=P ~(p -> p)",
        s.witness(
            &s.para(),
            Witness::Inclusion {
                premises: set("~(p -> p)"),
                formula: f("~(p -> p)"),
            },
        ),
    );
    let modified_forward = |gamma: &str, a: &str, b: &str, spec: &LogicSpec| {
        let (gamma, a, b) = (set(gamma), f(a), f(b));
        let mut extended = gamma.clone();
        extended.insert(a.clone());
        let lhs = logic_entails(spec, &extended, &b).expect("small");
        let rhs = logic_entails(spec, &gamma, &a.clone().imp(a.clone().imp(b))).expect("small");
        lhs && rhs
    };
    s.add(
        "modified_dt_instance",
        "{p -> q} ∪ {p} |= q and {p -> q} |= p -> (p -> q)",
        modified_forward("p -> q", "p", "q", &s.base()),
    );
    s.add(
        "modified_dt_tautology",
        "{p & (p -> q)} |= q and |= (p & (p -> q)) -> ((p & (p -> q)) -> q)",
        modified_forward("", "p & (p -> q)", "q", &s.base()),
    );
    s.add(
        "para_modified_dt_instance",
        "{p -> q} ∪ {p} |=P q and {p -> q} |=P p -> (p -> q)",
        modified_forward("p -> q", "p", "q", &s.para()),
    );
    let c = f("~(p -> p)");
    s.add(
        "para_modified_dt_converse_failure",
        "|=P c -> (c -> c) but {c} |/=P c, for c = ~(p -> p)",
        s.witness(
            &s.para(),
            Witness::Deduction {
                premises: FormulaSet::new(),
                antecedent: c.clone(),
                consequent: c.clone(),
                implication: c.clone().imp(c.clone().imp(c)),
                direction: Direction::Converse,
            },
        ),
    );
    s.add(
        "full_dt_failure",
        "{p & (p -> q)} |= q but |/= (p & (p -> q)) -> q",
        s.witness(
            &s.base(),
            Witness::Deduction {
                premises: FormulaSet::new(),
                antecedent: f("p & (p -> q)"),
                consequent: f("q"),
                implication: f("(p & (p -> q)) -> q"),
                direction: Direction::Forward,
            },
        ),
    );
    s.add(
        "para_modified_dt_forward_sampled",
        "forward modified deduction theorem holds on samples in P(L3)",
        s.sampled(&s.para(), PropertyId::ModifiedWeakDtFwd),
    );
}

fn g3(s: &mut Suite) {
    s.add(
        "contradiction",
        "p & ~p is a contradiction",
        classify(s.m, &f("p & ~p")) == Classification::Contradiction,
    );
    s.add(
        "contradiction_self_implication",
        "(p & ~p) -> (p & ~p) is a tautology",
        semantics::is_tautology(s.m, &f("(p & ~p) -> (p & ~p)")),
    );
    s.add(
        "para_inclusion_failure",
        "{p & ~p} |/=P p & ~p",
        s.witness(
            &s.para(),
            Witness::Inclusion {
                premises: set("p & ~p"),
                formula: f("p & ~p"),
            },
        ),
    );
    s.add(
        "full_dt_sampled",
        "full deduction theorem holds on samples",
        s.sampled(&s.base(), PropertyId::FullDt),
    );
    s.add(
        "para_dt_forward_sampled",
        "forward deduction theorem holds on samples in P(G3)",
        s.sampled(&s.para(), PropertyId::WeakDtFwd),
    );
}

fn k3(s: &mut Suite) {
    let half = Valuation::from_iter([("p".to_string(), Value::HALF)]);
    let r = semantics::entails(s.m, &FormulaSet::new(), &f("p -> p"));
    s.add(
        "no_self_implication",
        "|/= p -> p, countermodel p = 1/2",
        !r.holds && r.countermodel == Some(half),
    );
    s.add(
        "empty_closure_probe",
        "no formula over {p, q} of depth <= 2 follows from the empty set",
        enumerate_formulas(["p", "q"], 2).all(|x| !semantics::is_tautology(s.m, &x)),
    );
    s.add(
        "unique_consistent_subset",
        "the only consistent subset of {p & ~p} is the empty set",
        consistent_subsets(s.m, &set("p & ~p")).is_ok_and(|v| v == [FormulaSet::new()]),
    );
    s.add(
        "weak_dt_failure",
        "{p} |= p but |/= p -> p",
        s.witness(
            &s.base(),
            Witness::Deduction {
                premises: FormulaSet::new(),
                antecedent: f("p"),
                consequent: f("p"),
                implication: f("p -> p"),
                direction: Direction::Forward,
            },
        ),
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::lukasiewicz;

    #[test]
    fn suites_pass() {
        for name in ["l3", "g3", "k3"] {
            let report = verify_witness_suite(&LogicSpec::base(builtin(name).unwrap()));
            let failed: Vec<_> = report.entries.iter().filter(|e| !e.passed).collect();
            assert!(failed.is_empty(), "{name}: {failed:?}");
        }
    }

    #[test]
    fn unknown_matrix_has_no_suite() {
        let report = verify_witness_suite(&LogicSpec::base(lukasiewicz(4).unwrap()));
        assert_eq!(report.suite, None);
        assert!(report.entries.is_empty());
    }

    #[test]
    fn suite_is_found_by_tables() {
        let renamed = builtin("l3").unwrap().with_name("mine");
        assert_eq!(
            verify_witness_suite(&LogicSpec::para(renamed))
                .suite
                .as_deref(),
            Some("l3")
        );
    }
}
