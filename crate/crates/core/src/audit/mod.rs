//! Metalogical property checks over matrix logics and their transforms.
//!
//! Each check yields a [`Verdict`]. Negative verdicts always carry a
//! [`Witness`] that [`Witness::replay`] re-derives from plain entailment
//! calls; positive universal claims are only ever sampled or bounded.

mod checks;
mod conjunctive;
mod suite;
mod table;
mod witness;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::para::LogicSpec;

pub use suite::{verify_witness_suite, SuiteEntry, WitnessReport};
pub use table::{
    check_logic_pair, reference_logics, reference_value, replay, run_table, AuditReport,
    Discrepancy, KNOWN_DISCREPANCIES,
};
pub use witness::{Direction, Probe, Witness};

/// The rows of the summary table, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyId {
    Explosive,
    JointConsistency,
    ConjunctiveProperty,
    Paraconsistent,
    InconsistentSetsExist,
    PIdempotent,
    Inclusion,
    Monotonicity,
    Idempotency,
    Transitivity,
    WeakTransitivity,
    ModusPonens,
    FullDt,
    ModifiedFullDt,
    WeakDtFwd,
    ModifiedWeakDtFwd,
}

impl PropertyId {
    pub const ALL: [PropertyId; 16] = [
        PropertyId::Explosive,
        PropertyId::JointConsistency,
        PropertyId::ConjunctiveProperty,
        PropertyId::Paraconsistent,
        PropertyId::InconsistentSetsExist,
        PropertyId::PIdempotent,
        PropertyId::Inclusion,
        PropertyId::Monotonicity,
        PropertyId::Idempotency,
        PropertyId::Transitivity,
        PropertyId::WeakTransitivity,
        PropertyId::ModusPonens,
        PropertyId::FullDt,
        PropertyId::ModifiedFullDt,
        PropertyId::WeakDtFwd,
        PropertyId::ModifiedWeakDtFwd,
    ];

    pub fn key(self) -> &'static str {
        match self {
            PropertyId::Explosive => "explosive",
            PropertyId::JointConsistency => "joint_consistency",
            PropertyId::ConjunctiveProperty => "conjunctive_property",
            PropertyId::Paraconsistent => "paraconsistent",
            PropertyId::InconsistentSetsExist => "inconsistent_sets_exist",
            PropertyId::PIdempotent => "p_idempotent",
            PropertyId::Inclusion => "inclusion",
            PropertyId::Monotonicity => "monotonicity",
            PropertyId::Idempotency => "idempotency",
            PropertyId::Transitivity => "transitivity",
            PropertyId::WeakTransitivity => "weak_transitivity",
            PropertyId::ModusPonens => "modus_ponens",
            PropertyId::FullDt => "full_dt",
            PropertyId::ModifiedFullDt => "modified_full_dt",
            PropertyId::WeakDtFwd => "weak_dt_fwd",
            PropertyId::ModifiedWeakDtFwd => "modified_weak_dt_fwd",
        }
    }

    /// Row label as printed in the summary table.
    pub fn label(self) -> &'static str {
        match self {
            PropertyId::Explosive => "explosive property",
            PropertyId::JointConsistency => "joint consistency",
            PropertyId::ConjunctiveProperty => "conjunctive property",
            PropertyId::Paraconsistent => "paraconsistent",
            PropertyId::InconsistentSetsExist => "inconsistent sets",
            PropertyId::PIdempotent => "P(P(L)) = P(L)",
            PropertyId::Inclusion => "inclusion",
            PropertyId::Monotonicity => "monotonicity",
            PropertyId::Idempotency => "idempotency",
            PropertyId::Transitivity => "transitivity",
            PropertyId::WeakTransitivity => "weak transitivity",
            PropertyId::ModusPonens => "modus ponens",
            PropertyId::FullDt => "full deduction theorem",
            PropertyId::ModifiedFullDt => "modified full deduction theorem",
            PropertyId::WeakDtFwd => "weak deduction theorem (=>)",
            PropertyId::ModifiedWeakDtFwd => "modified weak deduction theorem (=>)",
        }
    }

    pub fn index(self) -> usize {
        PropertyId::ALL
            .iter()
            .position(|&p| p == self)
            .expect("listed")
    }

    pub fn is_deduction_variant(self) -> bool {
        matches!(
            self,
            PropertyId::FullDt
                | PropertyId::ModifiedFullDt
                | PropertyId::WeakDtFwd
                | PropertyId::ModifiedWeakDtFwd
        )
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown property `{0}`")]
pub struct UnknownProperty(pub String);

impl FromStr for PropertyId {
    type Err = UnknownProperty;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PropertyId::ALL
            .into_iter()
            .find(|p| p.key() == s)
            .ok_or_else(|| UnknownProperty(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Holds,
    Fails,
    Undecided,
}

impl Outcome {
    pub fn from_bool(holds: bool) -> Outcome {
        if holds {
            Outcome::Holds
        } else {
            Outcome::Fails
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Outcome::Holds => "✓",
            Outcome::Fails => "×",
            Outcome::Undecided => "?",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Holds => "HOLDS",
            Outcome::Fails => "FAILS",
            Outcome::Undecided => "UNDECIDED",
        })
    }
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    /// A finite argument checked in full.
    Exact,
    /// A concrete instance, replayed.
    Witness,
    /// No violation among the sampled instances.
    Sampled,
    /// Exhaustive over a bounded candidate space.
    Bounded,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "EXACT",
            Method::Witness => "WITNESS",
            Method::Sampled => "SAMPLED",
            Method::Bounded => "BOUNDED",
        })
    }
}

/// Search limits for the checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Random instances per universal claim.
    pub samples: usize,
    /// Maximum depth of sampled formulas.
    pub depth: usize,
    /// Number of letters sampled formulas draw from.
    pub letters: usize,
    /// Maximum size of sampled premise sets.
    pub gamma_size: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            samples: 500,
            depth: 3,
            letters: 3,
            gamma_size: 5,
            seed: 0,
        }
    }
}

pub const MAX_BUDGET_LETTERS: usize = 8;
pub const MAX_BUDGET_DEPTH: usize = 6;
/// Keeps unions of two sampled sets and one extra formula within the
/// premise bound of the transform.
pub const MAX_BUDGET_GAMMA: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BudgetError {
    #[error("samples must be positive")]
    NoSamples,
    #[error("depth must be between 1 and {MAX_BUDGET_DEPTH}, got {0}")]
    Depth(usize),
    #[error("letters must be between 2 and {MAX_BUDGET_LETTERS}, got {0}")]
    Letters(usize),
    #[error("gamma size must be between 1 and {MAX_BUDGET_GAMMA}, got {0}")]
    GammaSize(usize),
}

impl Budget {
    pub fn validate(&self) -> Result<(), BudgetError> {
        if self.samples == 0 {
            return Err(BudgetError::NoSamples);
        }
        if !(1..=MAX_BUDGET_DEPTH).contains(&self.depth) {
            return Err(BudgetError::Depth(self.depth));
        }
        if !(2..=MAX_BUDGET_LETTERS).contains(&self.letters) {
            return Err(BudgetError::Letters(self.letters));
        }
        if !(1..=MAX_BUDGET_GAMMA).contains(&self.gamma_size) {
            return Err(BudgetError::GammaSize(self.gamma_size));
        }
        Ok(())
    }

    pub fn letter_names(&self) -> Vec<String> {
        ["p", "q", "r", "s", "t", "u", "v", "w"][..self.letters.min(MAX_BUDGET_LETTERS)]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    pub fn bounds(&self) -> Bounds {
        Bounds {
            max_depth: self.depth,
            max_letters: self.letters,
            max_gamma: self.gamma_size,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_depth: usize,
    pub max_letters: usize,
    pub max_gamma: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: PropertyId,
    /// Label of the audited logic, e.g. `P(L3)`.
    pub logic: String,
    pub para_depth: usize,
    pub outcome: Outcome,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub samples_run: usize,
    pub bounds: Bounds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Reading adopted for the modus ponens row.
pub const MODUS_PONENS_READING: &str =
    "closure rule: alpha, alpha -> beta in Cn(Gamma) implies beta in Cn(Gamma)";

/// Decides `property` for `logic` within `budget`.
///
/// # Panics
///
/// If the budget is invalid or `logic` has a depth above the supported
/// maximum.
pub fn check_property(logic: &LogicSpec, property: PropertyId, budget: &Budget) -> Verdict {
    budget.validate().expect("valid budget");
    checks::run(logic, property, budget)
}

/// One of the four deduction-theorem rows.
///
/// # Panics
///
/// If `variant` is not a deduction-theorem row, or as [`check_property`].
pub fn check_deduction_variant(logic: &LogicSpec, variant: PropertyId, budget: &Budget) -> Verdict {
    assert!(
        variant.is_deduction_variant(),
        "{variant} is not a deduction theorem variant"
    );
    check_property(logic, variant, budget)
}

pub fn check_modus_ponens(logic: &LogicSpec, budget: &Budget) -> Verdict {
    check_property(logic, PropertyId::ModusPonens, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn property_keys_round_trip() {
        for (i, p) in PropertyId::ALL.into_iter().enumerate() {
            assert_eq!(p.key().parse::<PropertyId>().unwrap(), p);
            assert_eq!(p.index(), i);
            assert_eq!(
                serde_json::to_string(&p).unwrap(),
                format!("\"{}\"", p.key())
            );
        }
        assert!("modus".parse::<PropertyId>().is_err());
    }

    #[test]
    fn budget_validation() {
        assert!(Budget::default().validate().is_ok());
        assert_eq!(
            Budget {
                samples: 0,
                ..Budget::default()
            }
            .validate(),
            Err(BudgetError::NoSamples)
        );
        assert_eq!(
            Budget {
                letters: 1,
                ..Budget::default()
            }
            .validate(),
            Err(BudgetError::Letters(1))
        );
        assert_eq!(
            Budget {
                gamma_size: 9,
                ..Budget::default()
            }
            .validate(),
            Err(BudgetError::GammaSize(9))
        );
        assert_eq!(Budget::default().letter_names(), vec!["p", "q", "r"]);
    }
}
