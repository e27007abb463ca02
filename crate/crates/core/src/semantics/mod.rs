//! Matrix semantics: valuations, evaluation, models, entailment,
//! classification and consistency.

mod domain;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{enumerate_formulas, Formula, FormulaSet};
use crate::matrix::{Matrix, Value};

pub use domain::{Domain, ModelSet, MAX_VALUATIONS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("letter `{0}` is not assigned a value")]
    UnassignedLetter(String),
    #[error("letter `{letter}` is assigned {value}, which is not a value of the matrix")]
    NotAValue { letter: String, value: String },
    #[error("{0}")]
    Inapplicable(String),
}

/// An assignment of values to a finite set of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation(BTreeMap<String, Value>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, letter: &str) -> Option<Value> {
        self.0.get(letter).copied()
    }

    pub fn set(&mut self, letter: impl Into<String>, value: Value) {
        self.0.insert(letter.into(), value);
    }

    pub fn letters(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.0.iter()
    }

    /// The same value for every letter.
    pub fn constant<'a>(letters: impl IntoIterator<Item = &'a String>, value: Value) -> Self {
        letters.into_iter().map(|l| (l.clone(), value)).collect()
    }
}

impl FromIterator<(String, Value)> for Valuation {
    fn from_iter<T: IntoIterator<Item = (String, Value)>>(iter: T) -> Self {
        Valuation(iter.into_iter().collect())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(l, v)| format!("{l}={v}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Outcome of `gamma |= alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntailmentResult {
    pub holds: bool,
    /// A model of the premises that does not designate the conclusion.
    pub countermodel: Option<Valuation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// Designated under every valuation.
    Tautology,
    /// Value 0 under every valuation.
    Contradiction,
    /// Never designated, but not constantly 0.
    UnsatisfiableNondegenerate,
    Contingent,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Tautology => "tautology",
            Classification::Contradiction => "contradiction",
            Classification::UnsatisfiableNondegenerate => "unsatisfiable_nondegenerate",
            Classification::Contingent => "contingent",
        })
    }
}

/// Recursive evaluation of `f` under `v`.
pub fn eval(m: &Matrix, v: &Valuation, f: &Formula) -> Result<Value, SemanticsError> {
    fn go(m: &Matrix, v: &Valuation, f: &Formula) -> Result<usize, SemanticsError> {
        match f {
            Formula::Letter(name) => {
                let value = v
                    .get(name)
                    .ok_or_else(|| SemanticsError::UnassignedLetter(name.to_string()))?;
                m.index_of(value).ok_or_else(|| SemanticsError::NotAValue {
                    letter: name.to_string(),
                    value: value.to_string(),
                })
            }
            Formula::Neg(a) => Ok(m.neg_index(go(m, v, a)?)),
            _ => {
                let (op, a, b) = f.as_binary().expect("binary node");
                Ok(m.binary_index(op, go(m, v, a)?, go(m, v, b)?))
            }
        }
    }
    go(m, v, f).map(|i| m.value(i))
}

/// Every valuation of `letters`, in odometer order (values ascending,
/// letters lexicographic, last letter fastest).
pub fn valuations<'m, I, S>(m: &'m Matrix, letters: I) -> impl Iterator<Item = Valuation> + 'm
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let domain = Domain::new(m, letters);
    (0..domain.size()).map(move |i| domain.valuation(i))
}

/// `Mod(gamma)` over the given letter domain.
pub fn models<I, S>(
    m: &Matrix,
    gamma: &FormulaSet,
    letters: I,
) -> Result<Vec<Valuation>, SemanticsError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let domain = Domain::new(m, letters);
    let set = domain.models_of_set(gamma)?;
    Ok(set.iter().map(|i| domain.valuation(i)).collect())
}

/// `gamma |= alpha`, decided over `letters(gamma) ∪ letters(alpha)`.
pub fn entails(m: &Matrix, gamma: &FormulaSet, alpha: &Formula) -> EntailmentResult {
    let domain = Domain::for_formulas(m, gamma.iter().chain([alpha]));
    let premises = domain.models_of_set(gamma).expect("domain covers premises");
    let conclusion = domain.models(alpha).expect("domain covers conclusion");
    match premises.first_outside(&conclusion) {
        None => EntailmentResult {
            holds: true,
            countermodel: None,
        },
        Some(i) => EntailmentResult {
            holds: false,
            countermodel: Some(domain.valuation(i)),
        },
    }
}

/// Whether `|= alpha`, i.e. `{} |= alpha`.
pub fn is_tautology(m: &Matrix, alpha: &Formula) -> bool {
    entails(m, &FormulaSet::new(), alpha).holds
}

/// Classifies `alpha` over the valuations of its letters. The contradiction
/// class needs a non-designated value `0`; without one, constantly-undesignated
/// formulas are `UnsatisfiableNondegenerate`.
pub fn classify(m: &Matrix, alpha: &Formula) -> Classification {
    let domain = Domain::for_formulas(m, [alpha]);
    let col = domain.column(alpha).expect("domain covers formula");
    let zero = m
        .index_of(Value::ZERO)
        .filter(|&i| !m.is_designated_index(i));
    if col.iter().all(|&x| m.is_designated_index(x as usize)) {
        Classification::Tautology
    } else if zero.is_some_and(|z| col.iter().all(|&x| x as usize == z)) {
        Classification::Contradiction
    } else if col.iter().all(|&x| !m.is_designated_index(x as usize)) {
        Classification::UnsatisfiableNondegenerate
    } else {
        Classification::Contingent
    }
}

/// `Cn(gamma) != For`. For finite `gamma` this is exactly satisfiability: a
/// model of `gamma` extended by a fresh letter set to an undesignated value
/// refutes `gamma |= fresh`.
pub fn is_consistent(m: &Matrix, gamma: &FormulaSet) -> bool {
    let domain = Domain::for_formulas(m, gamma.iter());
    !domain
        .models_of_set(gamma)
        .expect("domain covers premises")
        .is_empty()
}

/// Evaluates every formula over `letters` up to `max_depth` under the
/// all-1/2 valuation and reports whether each one takes the value 1/2.
/// Such a matrix has neither tautologies nor contradictions in that range
/// (provided 1/2 is undesignated).
pub fn tautology_free_check<I, S>(
    m: &Matrix,
    letters: I,
    max_depth: usize,
) -> Result<bool, SemanticsError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    if m.index_of(Value::HALF).is_none() {
        return Err(SemanticsError::Inapplicable(format!(
            "{} has no value 1/2",
            m.name()
        )));
    }
    let letters: BTreeSet<String> = letters
        .into_iter()
        .map(|s| s.as_ref().to_string())
        .collect();
    let all_half = Valuation::constant(&letters, Value::HALF);
    for f in enumerate_formulas(&letters, max_depth) {
        if eval(m, &all_half, &f)? != Value::HALF {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, parse_set};
    use crate::matrix::builtin;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }
    fn set(s: &str) -> FormulaSet {
        parse_set(s).unwrap()
    }
    fn val(pairs: &[(&str, Value)]) -> Valuation {
        pairs.iter().map(|(l, v)| (l.to_string(), *v)).collect()
    }

    #[test]
    fn eval_examples() {
        let half_p = val(&[("p", Value::HALF)]);
        assert_eq!(
            eval(&builtin("l3").unwrap(), &half_p, &f("~p")).unwrap(),
            Value::HALF
        );
        assert_eq!(
            eval(&builtin("g3").unwrap(), &half_p, &f("~p")).unwrap(),
            Value::ZERO
        );
        let half_pq = val(&[("p", Value::HALF), ("q", Value::HALF)]);
        assert_eq!(
            eval(&builtin("k3").unwrap(), &half_pq, &f("p -> q")).unwrap(),
            Value::HALF
        );
        assert_eq!(
            eval(&builtin("k3").unwrap(), &half_p, &f("p -> q")),
            Err(SemanticsError::UnassignedLetter("q".into()))
        );
        let bad = val(&[("p", Value::new(1, 3))]);
        assert!(matches!(
            eval(&builtin("k3").unwrap(), &bad, &f("p")),
            Err(SemanticsError::NotAValue { .. })
        ));
    }

    #[test]
    fn valuation_counts() {
        let l3 = builtin("l3").unwrap();
        let cl2 = builtin("cl2").unwrap();
        assert_eq!(valuations(&l3, ["p"]).count(), 3);
        assert_eq!(valuations(&l3, ["p", "q"]).count(), 9);
        assert_eq!(valuations(&cl2, ["p", "q", "r"]).count(), 8);
        assert_eq!(valuations(&cl2, Vec::<String>::new()).count(), 1);
        let all: BTreeSet<_> = valuations(&l3, ["p", "q"]).collect();
        assert_eq!(all.len(), 9);
    }

    #[test]
    fn model_examples() {
        let l3 = builtin("l3").unwrap();
        assert!(models(&l3, &set("~(p -> p)"), ["p"]).unwrap().is_empty());
        let mods = models(&l3, &set("p | q, ~p"), ["p", "q"]).unwrap();
        assert_eq!(mods, vec![val(&[("p", Value::ZERO), ("q", Value::ONE)])]);
        let k3 = builtin("k3").unwrap();
        assert!(models(&k3, &set("p & ~p"), ["p"]).unwrap().is_empty());
    }

    #[test]
    fn entailment_examples() {
        let l3 = builtin("l3").unwrap();
        assert!(entails(&l3, &set("p | q, ~p"), &f("q")).holds);
        assert!(entails(&l3, &set("~(p -> p)"), &f("q")).holds);
        let k3 = builtin("k3").unwrap();
        let r = entails(&k3, &set(""), &f("p -> p"));
        assert!(!r.holds);
        assert_eq!(r.countermodel, Some(val(&[("p", Value::HALF)])));
    }

    #[test]
    fn countermodels_are_genuine() {
        let l3 = builtin("l3").unwrap();
        let gamma = set("p -> q");
        let alpha = f("q");
        let r = entails(&l3, &gamma, &alpha);
        let cm = r.countermodel.unwrap();
        assert!(gamma
            .iter()
            .all(|g| l3.is_designated(eval(&l3, &cm, g).unwrap())));
        assert!(!l3.is_designated(eval(&l3, &cm, &alpha).unwrap()));
    }

    #[test]
    fn classification_examples() {
        let l3 = builtin("l3").unwrap();
        let g3 = builtin("g3").unwrap();
        assert_eq!(
            classify(&l3, &f("~(p -> p)")),
            Classification::Contradiction
        );
        assert_eq!(
            classify(&l3, &f("p & ~p")),
            Classification::UnsatisfiableNondegenerate
        );
        assert_eq!(classify(&g3, &f("p & ~p")), Classification::Contradiction);
        assert_eq!(classify(&l3, &f("p -> p")), Classification::Tautology);
        assert_eq!(classify(&l3, &f("p")), Classification::Contingent);
    }

    #[test]
    fn consistency_examples() {
        let l3 = builtin("l3").unwrap();
        assert!(!is_consistent(&l3, &set("p, ~p")));
        assert!(is_consistent(&l3, &set("p")));
        assert!(is_consistent(&l3, &set("~p")));
        assert!(is_consistent(&l3, &set("")));
        assert!(!is_consistent(&builtin("k3").unwrap(), &set("p & ~p")));
    }

    #[test]
    fn tautology_free_examples() {
        assert!(tautology_free_check(&builtin("k3").unwrap(), ["p", "q"], 2).unwrap());
        assert!(!tautology_free_check(&builtin("l3").unwrap(), ["p"], 2).unwrap());
        assert!(!tautology_free_check(&builtin("g3").unwrap(), ["p"], 2).unwrap());
        assert!(matches!(
            tautology_free_check(&builtin("cl2").unwrap(), ["p"], 1),
            Err(SemanticsError::Inapplicable(_))
        ));
    }
}
