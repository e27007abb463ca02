use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_property, Budget, Outcome, PropertyId, Verdict, Witness};
use crate::matrix::{builtin, Matrix};
use crate::para::LogicSpec;

use PropertyId::*;

/// Reference values, rows in [`PropertyId::ALL`] order, columns
/// L3, P(L3), G3, P(G3), K3, P(K3).
const REFERENCE: [[bool; 6]; 16] = {
    const T: bool = true;
    const F: bool = false;
    [
        [T, F, T, F, T, F],
        [T, T, T, T, T, T],
        [T, F, T, F, T, F],
        [F, T, F, T, F, T],
        [T, F, T, F, T, F],
        [T, T, T, T, T, T],
        [T, F, T, F, T, F],
        [T, T, T, T, T, T],
        [T, F, T, F, T, F],
        [T, F, T, F, T, F],
        [T, T, T, T, T, T],
        [T, F, T, F, T, F],
        [F, F, T, F, F, F],
        [T, T, T, F, F, F],
        [F, F, T, T, F, F],
        [T, T, T, T, F, F],
    ]
};

const REFERENCE_LOGICS: [&str; 6] = ["L3", "P(L3)", "G3", "P(G3)", "K3", "P(K3)"];

/// Cells where the computed value is expected to differ from the
/// reference table.
pub const KNOWN_DISCREPANCIES: [(PropertyId, &str); 4] = [
    (JointConsistency, "P(L3)"),
    (JointConsistency, "P(G3)"),
    (JointConsistency, "P(K3)"),
    (ModifiedFullDt, "P(L3)"),
];

/// L3, P(L3), G3, P(G3), K3, P(K3).
pub fn reference_logics() -> Vec<LogicSpec> {
    ["l3", "g3", "k3"]
        .into_iter()
        .flat_map(|name| {
            let m = builtin(name).expect("built-in");
            [LogicSpec::base(m.clone()), LogicSpec::para(m)]
        })
        .collect()
}

/// Reference value of a cell, by logic label.
pub fn reference_value(property: PropertyId, logic: &str) -> Option<bool> {
    let col = REFERENCE_LOGICS.iter().position(|&l| l == logic)?;
    Some(REFERENCE[property.index()][col])
}

/// Whether the verdict's evidence re-derives its outcome. A failure
/// without a witness never replays.
pub fn replay(spec: &LogicSpec, verdict: &Verdict) -> bool {
    match &verdict.witness {
        Some(w) => w.replay(spec),
        None => verdict.outcome != Outcome::Fails,
    }
}

fn cell_key(property: PropertyId, logic: &str) -> String {
    format!("{}/{logic}", property.key())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    /// `property/logic`
    pub cell: String,
    pub reference: bool,
    pub computed: Outcome,
    pub evidence: Option<Witness>,
    pub replayed: bool,
    /// Listed in [`KNOWN_DISCREPANCIES`].
    pub known: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub budget: Budget,
    /// Whether the columns are the reference logics.
    pub reference: bool,
    pub properties: Vec<PropertyId>,
    pub logics: Vec<String>,
    /// Keyed `property/logic`.
    pub grid: BTreeMap<String, Verdict>,
    pub discrepancies: Vec<Discrepancy>,
}

fn audit(logics: &[LogicSpec], budget: &Budget, reference: bool) -> AuditReport {
    let cells: Vec<(PropertyId, &LogicSpec)> = PropertyId::ALL
        .iter()
        .flat_map(|&p| logics.iter().map(move |l| (p, l)))
        .collect();
    let verdicts: Vec<Verdict> = cells
        .par_iter()
        .map(|&(p, l)| check_property(l, p, budget))
        .collect();

    let mut discrepancies = Vec::new();
    for (&(property, spec), verdict) in cells.iter().zip(&verdicts) {
        let Some(expected) = reference
            .then(|| reference_value(property, &verdict.logic))
            .flatten()
        else {
            continue;
        };
        if verdict.outcome == Outcome::from_bool(expected) {
            continue;
        }
        discrepancies.push(Discrepancy {
            cell: cell_key(property, &verdict.logic),
            reference: expected,
            computed: verdict.outcome,
            evidence: verdict.witness.clone(),
            replayed: verdict.witness.is_some() && replay(spec, verdict),
            known: KNOWN_DISCREPANCIES.contains(&(property, verdict.logic.as_str())),
        });
    }
    AuditReport {
        budget: *budget,
        reference,
        properties: PropertyId::ALL.to_vec(),
        logics: logics.iter().map(LogicSpec::label).collect(),
        grid: verdicts
            .into_iter()
            .map(|v| (cell_key(v.property, &v.logic), v))
            .collect(),
        discrepancies,
    }
}

/// All 96 cells of the reference table, compared against it.
///
/// # Panics
///
/// If the budget is invalid.
pub fn run_table(budget: &Budget) -> AuditReport {
    audit(&reference_logics(), budget, true)
}

/// The 16 properties for a matrix and its transform, with nothing to
/// compare against.
pub fn check_logic_pair(matrix: &Matrix, budget: &Budget) -> AuditReport {
    let logics = [
        LogicSpec::base(matrix.clone()),
        LogicSpec::para(matrix.clone()),
    ];
    audit(&logics, budget, false)
}

impl AuditReport {
    pub fn verdict(&self, property: PropertyId, logic: &str) -> Option<&Verdict> {
        self.grid.get(&cell_key(property, logic))
    }

    /// Discrepancies not on the known list or whose evidence failed to
    /// replay.
    pub fn unexpected(&self) -> Vec<&Discrepancy> {
        self.discrepancies
            .iter()
            .filter(|d| !d.known || !d.replayed)
            .collect()
    }

    pub fn is_clean(&self) -> bool {
        self.unexpected().is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned grid of ✓ / × / ? marks; `*` marks a cell that differs from
    /// the reference table.
    pub fn render_text(&self) -> String {
        let flagged: Vec<&str> = self.discrepancies.iter().map(|d| d.cell.as_str()).collect();
        let label_width = self
            .properties
            .iter()
            .map(|p| p.label().chars().count())
            .max()
            .unwrap_or(0);
        let col_width = self
            .logics
            .iter()
            .map(|l| l.chars().count())
            .max()
            .unwrap_or(0)
            .max(2)
            + 2;
        let pad =
            |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));

        let mut out = String::new();
        out.push_str(&pad("", label_width + 2));
        for l in &self.logics {
            out.push_str(&pad(l, col_width));
        }
        out = out.trim_end().to_string();
        out.push('\n');
        out.push_str(&"-".repeat(label_width + 2 + col_width * self.logics.len()));
        out.push('\n');
        for &p in &self.properties {
            let mut row = pad(p.label(), label_width + 2);
            for l in &self.logics {
                let key = cell_key(p, l);
                let mark = self.grid.get(&key).map_or("-", |v| v.outcome.symbol());
                let star = if flagged.contains(&key.as_str()) {
                    "*"
                } else {
                    ""
                };
                row.push_str(&pad(&format!("{mark}{star}"), col_width));
            }
            out.push_str(row.trim_end());
            out.push('\n');
        }
        if !self.reference {
            out.push_str("\nno reference values for these logics\n");
        } else if !self.discrepancies.is_empty() {
            out.push_str("\n* differs from the reference table:\n");
            for d in &self.discrepancies {
                let status = match (d.known, d.replayed) {
                    (true, true) => "known",
                    (false, true) => "UNEXPECTED",
                    (_, false) => "UNEXPECTED, evidence does not replay",
                };
                let _ = write!(
                    out,
                    "  {}: table {}, computed {} [{status}]",
                    d.cell,
                    Outcome::from_bool(d.reference).symbol(),
                    d.computed.symbol()
                );
                if let Some(e) = &d.evidence {
                    let _ = write!(out, "\n    {e}");
                }
                out.push('\n');
            }
        }
        out
    }
}
