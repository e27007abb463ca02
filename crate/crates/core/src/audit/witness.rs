use std::fmt;

use serde::{Deserialize, Serialize};

use super::conjunctive;
use crate::formula::{Formula, FormulaSet};
use crate::matrix::Value;
use crate::para::{logic_consistent, logic_entails, LogicSpec};
use crate::semantics;

/// Membership of a probe formula in a consequence set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub formula: Formula,
    pub entailed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `Gamma ∪ {alpha} |= beta` but not `Gamma |= implication`.
    Forward,
    /// `Gamma |= implication` but not `Gamma ∪ {alpha} |= beta`.
    Converse,
}

/// Structured evidence for a verdict. Every variant states a concrete fact
/// about one logic that [`Witness::replay`] re-derives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Negation sends every designated value outside the designated set, so
    /// no valuation designates both `x` and `~x`.
    StarCondition { negations: Vec<(Value, Value)> },
    /// `formula` and its negation follow from `premises`, which still do
    /// not entail the fresh letter.
    NonExplosion {
        premises: FormulaSet,
        formula: Formula,
        fresh: Formula,
    },
    /// `{formula}` and `{~formula}` are consistent, their union is not.
    JointConsistency { formula: Formula },
    /// `premises` entail everything, shown on a fresh letter.
    InconsistentSet {
        premises: FormulaSet,
        fresh: Formula,
    },
    /// Under the transform the empty subset is always consistent and never
    /// yields a fresh letter, so no premise set is inconsistent; shown here
    /// on `premises`.
    NoInconsistentSets {
        premises: FormulaSet,
        fresh: Formula,
    },
    /// No candidate `z` within the bounds has the consequences of `{x, y}`.
    /// With probes, a candidate is refuted when it disagrees with `{x, y}`
    /// on some probe; without, when its models differ.
    ConjunctiveRefutation {
        x: Formula,
        y: Formula,
        probes: Vec<Probe>,
        letters: Vec<String>,
        max_depth: usize,
        candidates: u64,
    },
    /// The once- and twice-transformed logics disagree.
    ParaIdempotence {
        premises: FormulaSet,
        formula: Formula,
        once: bool,
        twice: bool,
    },
    /// `formula` is a premise but not a consequence.
    Inclusion {
        premises: FormulaSet,
        formula: Formula,
    },
    Monotonicity {
        premises: FormulaSet,
        extra: FormulaSet,
        formula: Formula,
    },
    /// Every member of `intermediate` follows from `premises`, and
    /// `intermediate` entails `formula`, which `premises` do not.
    Transitivity {
        premises: FormulaSet,
        intermediate: FormulaSet,
        formula: Formula,
    },
    WeakTransitivity {
        first: Formula,
        second: Formula,
        third: Formula,
    },
    ModusPonens {
        premises: FormulaSet,
        antecedent: Formula,
        consequent: Formula,
    },
    Deduction {
        premises: FormulaSet,
        antecedent: Formula,
        consequent: Formula,
        implication: Formula,
        direction: Direction,
    },
}

pub(crate) fn star_negations(m: &crate::matrix::Matrix) -> Vec<(Value, Value)> {
    m.designated_values()
        .into_iter()
        .map(|d| (d, m.neg(d).expect("value of the matrix")))
        .collect()
}

fn singleton(f: &Formula) -> FormulaSet {
    std::iter::once(f.clone()).collect()
}

fn is_fresh(fresh: &Formula, premises: &FormulaSet) -> bool {
    matches!(fresh, Formula::Letter(_)) && fresh.letters().is_disjoint(&premises.letters())
}

impl Witness {
    /// Re-derives the stated fact in `spec`.
    pub fn replay(&self, spec: &LogicSpec) -> bool {
        self.try_replay(spec).unwrap_or(false)
    }

    fn try_replay(&self, spec: &LogicSpec) -> Option<bool> {
        let ent = |gamma: &FormulaSet, alpha: &Formula| logic_entails(spec, gamma, alpha).ok();
        let holds = match self {
            Witness::StarCondition { negations } => {
                spec.para_depth == 0
                    && *negations == star_negations(&spec.matrix)
                    && negations
                        .iter()
                        .all(|&(_, n)| !spec.matrix.is_designated(n))
            }
            Witness::NonExplosion {
                premises,
                formula,
                fresh,
            } => {
                is_fresh(fresh, premises)
                    && ent(premises, formula)?
                    && ent(premises, &formula.clone().neg())?
                    && !ent(premises, fresh)?
            }
            Witness::JointConsistency { formula } => {
                let neg = formula.clone().neg();
                let both: FormulaSet = [formula.clone(), neg.clone()].into_iter().collect();
                logic_consistent(spec, &singleton(formula)).ok()?
                    && logic_consistent(spec, &singleton(&neg)).ok()?
                    && !logic_consistent(spec, &both).ok()?
            }
            Witness::InconsistentSet { premises, fresh } => {
                is_fresh(fresh, premises)
                    && ent(premises, fresh)?
                    && !logic_consistent(spec, premises).ok()?
            }
            Witness::NoInconsistentSets { premises, fresh } => {
                spec.para_depth >= 1
                    && is_fresh(fresh, premises)
                    && !semantics::entails(&spec.matrix, &FormulaSet::new(), fresh).holds
                    && !ent(premises, fresh)?
            }
            Witness::ConjunctiveRefutation {
                x,
                y,
                probes,
                letters,
                max_depth,
                candidates,
            } => {
                let formulas: Vec<Formula> = probes.iter().map(|p| p.formula.clone()).collect();
                let probe_arg = (!probes.is_empty()).then_some(&formulas[..]);
                match conjunctive::refute(spec, x, y, letters, *max_depth, probe_arg) {
                    conjunctive::Search::Refuted {
                        probes: p,
                        candidates: c,
                    } => {
                        p == *probes
                            && c == *candidates
                            && conjunctive::cross_check(spec, x, y, letters, *max_depth, probe_arg)
                    }
                    conjunctive::Search::Survivor(_) => false,
                }
            }
            Witness::ParaIdempotence {
                premises,
                formula,
                once,
                twice,
            } => {
                let m = &spec.matrix;
                let e1 = logic_entails(&LogicSpec::new(m.clone(), 1), premises, formula).ok()?;
                let e2 = logic_entails(&LogicSpec::new(m.clone(), 2), premises, formula).ok()?;
                e1 == *once && e2 == *twice && once != twice
            }
            Witness::Inclusion { premises, formula } => {
                premises.contains(formula) && !ent(premises, formula)?
            }
            Witness::Monotonicity {
                premises,
                extra,
                formula,
            } => ent(premises, formula)? && !ent(&premises.union(extra), formula)?,
            Witness::Transitivity {
                premises,
                intermediate,
                formula,
            } => {
                let mut all = true;
                for d in intermediate {
                    all &= ent(premises, d)?;
                }
                all && ent(intermediate, formula)? && !ent(premises, formula)?
            }
            Witness::WeakTransitivity {
                first,
                second,
                third,
            } => {
                ent(&singleton(first), second)?
                    && ent(&singleton(second), third)?
                    && !ent(&singleton(first), third)?
            }
            Witness::ModusPonens {
                premises,
                antecedent,
                consequent,
            } => {
                let imp = antecedent.clone().imp(consequent.clone());
                ent(premises, antecedent)? && ent(premises, &imp)? && !ent(premises, consequent)?
            }
            Witness::Deduction {
                premises,
                antecedent,
                consequent,
                implication,
                direction,
            } => {
                let plain = antecedent.clone().imp(consequent.clone());
                let modified = antecedent.clone().imp(plain.clone());
                if *implication != plain && *implication != modified {
                    return Some(false);
                }
                let mut extended = premises.clone();
                extended.insert(antecedent.clone());
                let lhs = ent(&extended, consequent)?;
                let rhs = ent(premises, implication)?;
                match direction {
                    Direction::Forward => lhs && !rhs,
                    Direction::Converse => rhs && !lhs,
                }
            }
        };
        Some(holds)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::StarCondition { negations } => {
                write!(f, "negation leaves the designated set:")?;
                for (d, n) in negations {
                    write!(f, " ~{d} = {n}")?;
                }
                Ok(())
            }
            Witness::NonExplosion { premises, formula, fresh } => write!(
                f,
                "{premises} |= {formula} and {}, but {premises} |/= {fresh}",
                formula.clone().neg()
            ),
            Witness::JointConsistency { formula } => {
                write!(f, "{{{formula}}} and {{{}}} consistent, jointly inconsistent", formula.clone().neg())
            }
            Witness::InconsistentSet { premises, fresh } => write!(f, "{premises} |= {fresh} (fresh)"),
            Witness::NoInconsistentSets { premises, fresh } => write!(
                f,
                "no set is inconsistent: every premise set keeps the consistent subset {{}}, e.g. {premises} |/= {fresh}"
            ),
            Witness::ConjunctiveRefutation { x, y, probes, letters, max_depth, candidates } => {
                write!(
                    f,
                    "no z over {{{}}} of depth <= {max_depth} matches {{{x}, {y}}} ({candidates} candidates refuted",
                    letters.join(", ")
                )?;
                if !probes.is_empty() {
                    let shown: Vec<String> = probes
                        .iter()
                        .map(|p| format!("{}{}", if p.entailed { "" } else { "not " }, p.formula))
                        .collect();
                    write!(f, " on probes: {}", shown.join("; "))?;
                }
                write!(f, ")")
            }
            Witness::ParaIdempotence { premises, formula, once, twice } => write!(
                f,
                "{premises} |= {formula} is {once} once transformed, {twice} twice"
            ),
            Witness::Inclusion { premises, formula } => write!(f, "{premises} |/= {formula}"),
            Witness::Monotonicity { premises, extra, formula } => {
                write!(f, "{premises} |= {formula} but {} |/= {formula}", premises.union(extra))
            }
            Witness::Transitivity { premises, intermediate, formula } => write!(
                f,
                "{premises} |= each of {intermediate}, {intermediate} |= {formula}, {premises} |/= {formula}"
            ),
            Witness::WeakTransitivity { first, second, third } => {
                write!(f, "{{{first}}} |= {second}, {{{second}}} |= {third}, {{{first}}} |/= {third}")
            }
            Witness::ModusPonens { premises, antecedent, consequent } => write!(
                f,
                "{premises} |= {antecedent} and {}, but {premises} |/= {consequent}",
                antecedent.clone().imp(consequent.clone())
            ),
            Witness::Deduction { premises, antecedent, consequent, implication, direction } => {
                let mut extended = premises.clone();
                extended.insert(antecedent.clone());
                match direction {
                    Direction::Forward => {
                        write!(f, "{extended} |= {consequent} but {premises} |/= {implication}")
                    }
                    Direction::Converse => {
                        write!(f, "{premises} |= {implication} but {extended} |/= {consequent}")
                    }
                }
            }
        }
    }
}
