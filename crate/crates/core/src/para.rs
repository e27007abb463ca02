//! The paraconsistentization transform: `gamma |=P alpha` iff some
//! consistent subset of `gamma` entails `alpha`.
//!
//! Entailment is decided through the maximal consistent subsets (MSS) of
//! the premises. Because base entailment is monotone, a consistent subset
//! entailing `alpha` exists iff a maximal one does. Iterated transforms
//! (`para_depth >= 2`) are decided directly from the definition over the
//! subset lattice.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{fresh_letter, Formula, FormulaSet};
use crate::matrix::Matrix;
use crate::semantics::{self, Domain, ModelSet};

/// Default bound on the number of premises the subset searches accept.
pub const DEFAULT_MAX_PREMISES: usize = 16;
/// Above this many premises MSS are found by backtracking instead of by
/// tabulating every subset.
pub const BRUTE_FORCE_LIMIT: usize = 10;
/// Deepest supported iterate of the transform.
pub const MAX_PARA_DEPTH: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParaError {
    #[error("{len} premises exceed the subset bound of {bound}")]
    TooManyPremises { len: usize, bound: usize },
    #[error("para depth {0} exceeds the supported maximum of {MAX_PARA_DEPTH}")]
    DepthTooLarge(usize),
}

/// Outcome of `gamma |=P alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParaResult {
    pub holds: bool,
    /// Smallest consistent subset entailing the conclusion, ties broken by
    /// canonical order.
    pub witness_subset: Option<FormulaSet>,
}

/// A base matrix together with how many times the transform is applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicSpec {
    pub matrix: Matrix,
    pub para_depth: usize,
}

impl LogicSpec {
    pub fn new(matrix: Matrix, para_depth: usize) -> Self {
        LogicSpec { matrix, para_depth }
    }

    pub fn base(matrix: Matrix) -> Self {
        LogicSpec::new(matrix, 0)
    }

    pub fn para(matrix: Matrix) -> Self {
        LogicSpec::new(matrix, 1)
    }

    /// `L3`, `P(L3)`, `P(P(L3))`, ...
    pub fn label(&self) -> String {
        let mut s = self.matrix.name().to_string();
        for _ in 0..self.para_depth {
            s = format!("P({s})");
        }
        s
    }

    pub fn with_depth(&self, para_depth: usize) -> Self {
        LogicSpec::new(self.matrix.clone(), para_depth)
    }
}

impl fmt::Display for LogicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn check_bound(gamma: &FormulaSet, bound: usize) -> Result<(), ParaError> {
    if gamma.len() > bound {
        return Err(ParaError::TooManyPremises {
            len: gamma.len(),
            bound,
        });
    }
    Ok(())
}

fn indices(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// Subset masks ordered by cardinality, then lexicographically by the
/// positions they select.
fn canonical_sort(masks: &mut [u64]) {
    masks.sort_by_key(|&m| (m.count_ones(), indices(m).collect::<Vec<_>>()));
}

/// A premise set prepared for repeated `|=P` queries.
#[derive(Debug, Clone)]
pub struct ParaTheory<'m> {
    premises: FormulaSet,
    domain: Domain<'m>,
    masks: Vec<ModelSet>,
    /// Maximal consistent subsets with the models they share.
    maximal: Vec<(u64, ModelSet)>,
}

impl<'m> ParaTheory<'m> {
    pub fn new(m: &'m Matrix, gamma: &FormulaSet) -> Result<Self, ParaError> {
        Self::with_bound(m, gamma, gamma.letters(), DEFAULT_MAX_PREMISES)
    }

    /// Builds the theory over a letter domain that also covers `letters`,
    /// so that queries over those letters reuse the premise models.
    pub fn with_bound(
        m: &'m Matrix,
        gamma: &FormulaSet,
        letters: BTreeSet<String>,
        bound: usize,
    ) -> Result<Self, ParaError> {
        check_bound(gamma, bound)?;
        let mut all = gamma.letters();
        all.extend(letters);
        let domain = Domain::new(m, all);
        let masks: Vec<ModelSet> = gamma
            .iter()
            .map(|f| domain.models(f).expect("domain covers premises"))
            .collect();
        let mut maximal_masks = if gamma.len() <= BRUTE_FORCE_LIMIT {
            maximal_by_table(&masks, domain.size())
        } else {
            maximal_by_search(&masks, domain.size())
        };
        canonical_sort(&mut maximal_masks);
        let maximal = maximal_masks
            .into_iter()
            .map(|s| (s, intersect(&masks, s, domain.size())))
            .collect();
        Ok(ParaTheory {
            premises: gamma.clone(),
            domain,
            masks,
            maximal,
        })
    }

    pub fn premises(&self) -> &FormulaSet {
        &self.premises
    }

    pub fn maximal_consistent_subsets(&self) -> Vec<FormulaSet> {
        self.maximal
            .iter()
            .map(|(s, _)| self.premises.select(*s))
            .collect()
    }

    fn covers(&self, alpha: &Formula) -> bool {
        alpha
            .letters()
            .iter()
            .all(|l| self.domain.contains_letter(l))
    }

    fn widened(&self, alpha: &Formula) -> ParaTheory<'m> {
        let mut letters: BTreeSet<String> = self.domain.letters().iter().cloned().collect();
        letters.extend(alpha.letters());
        ParaTheory::with_bound(self.domain.matrix(), &self.premises, letters, usize::MAX)
            .expect("bound already checked")
    }

    pub fn entails(&self, alpha: &Formula) -> bool {
        if !self.covers(alpha) {
            return self.widened(alpha).entails(alpha);
        }
        let target = self.domain.models(alpha).expect("domain covers conclusion");
        self.maximal
            .iter()
            .any(|(_, shared)| shared.is_subset(&target))
    }

    pub fn entails_with_witness(&self, alpha: &Formula) -> ParaResult {
        if !self.covers(alpha) {
            return self.widened(alpha).entails_with_witness(alpha);
        }
        let target = self.domain.models(alpha).expect("domain covers conclusion");
        if !self
            .maximal
            .iter()
            .any(|(_, shared)| shared.is_subset(&target))
        {
            return ParaResult {
                holds: false,
                witness_subset: None,
            };
        }
        let n = self.masks.len();
        let witness = (0..=n)
            .flat_map(|k| (0..n).combinations(k))
            .find(|combo| {
                let mut shared = ModelSet::full(self.domain.size());
                for &i in combo {
                    shared.intersect_with(&self.masks[i]);
                }
                !shared.is_empty() && shared.is_subset(&target)
            })
            .expect("a maximal subset entails the conclusion");
        let mask = witness.iter().fold(0u64, |acc, &i| acc | 1 << i);
        ParaResult {
            holds: true,
            witness_subset: Some(self.premises.select(mask)),
        }
    }
}

fn intersect(masks: &[ModelSet], subset: u64, size: usize) -> ModelSet {
    let mut acc = ModelSet::full(size);
    for i in indices(subset) {
        acc.intersect_with(&masks[i]);
    }
    acc
}

/// Tabulates the shared models of all `2^n` subsets.
fn subset_table(masks: &[ModelSet], size: usize) -> Vec<ModelSet> {
    let n = masks.len();
    let mut table = Vec::with_capacity(1 << n);
    table.push(ModelSet::full(size));
    for s in 1u64..(1 << n) {
        let low = s.trailing_zeros() as usize;
        let rest = &table[(s & (s - 1)) as usize];
        table.push(rest.intersection(&masks[low]));
    }
    table
}

fn maximal_by_table(masks: &[ModelSet], size: usize) -> Vec<u64> {
    let n = masks.len();
    let consistent: Vec<bool> = subset_table(masks, size)
        .iter()
        .map(|s| !s.is_empty())
        .collect();
    (0u64..(1 << n))
        .filter(|&s| consistent[s as usize])
        .filter(|&s| (0..n).all(|i| s >> i & 1 == 1 || !consistent[(s | 1 << i) as usize]))
        .collect()
}

/// Backtracking over include/exclude decisions; only consistent partial
/// sets are extended, and leaves are kept when no excluded premise fits.
fn maximal_by_search(masks: &[ModelSet], size: usize) -> Vec<u64> {
    fn go(masks: &[ModelSet], i: usize, chosen: u64, shared: &ModelSet, out: &mut Vec<u64>) {
        if i == masks.len() {
            let maximal =
                (0..masks.len()).all(|j| chosen >> j & 1 == 1 || !shared.intersects(&masks[j]));
            if maximal {
                out.push(chosen);
            }
            return;
        }
        let with = shared.intersection(&masks[i]);
        if !with.is_empty() {
            go(masks, i + 1, chosen | 1 << i, &with, out);
        }
        go(masks, i + 1, chosen, shared, out);
    }
    let mut out = Vec::new();
    go(masks, 0, 0, &ModelSet::full(size), &mut out);
    out
}

/// All consistent subsets of `gamma` (always including the empty set),
/// ordered by cardinality then canonical position.
pub fn consistent_subsets(m: &Matrix, gamma: &FormulaSet) -> Result<Vec<FormulaSet>, ParaError> {
    check_bound(gamma, DEFAULT_MAX_PREMISES)?;
    let domain = Domain::for_formulas(m, gamma.iter());
    let masks: Vec<ModelSet> = gamma
        .iter()
        .map(|f| domain.models(f).expect("covered"))
        .collect();
    fn go(masks: &[ModelSet], i: usize, chosen: u64, shared: &ModelSet, out: &mut Vec<u64>) {
        if i == masks.len() {
            out.push(chosen);
            return;
        }
        let with = shared.intersection(&masks[i]);
        if !with.is_empty() {
            go(masks, i + 1, chosen | 1 << i, &with, out);
        }
        go(masks, i + 1, chosen, shared, out);
    }
    let mut out = Vec::new();
    go(&masks, 0, 0, &ModelSet::full(domain.size()), &mut out);
    canonical_sort(&mut out);
    Ok(out.into_iter().map(|s| gamma.select(s)).collect())
}

/// The inclusion-maximal consistent subsets of `gamma`.
pub fn maximal_consistent_subsets(
    m: &Matrix,
    gamma: &FormulaSet,
) -> Result<Vec<FormulaSet>, ParaError> {
    Ok(ParaTheory::new(m, gamma)?.maximal_consistent_subsets())
}

/// `gamma |=P alpha` with a minimal witness subset.
pub fn para_entails(
    m: &Matrix,
    gamma: &FormulaSet,
    alpha: &Formula,
) -> Result<ParaResult, ParaError> {
    let theory = ParaTheory::with_bound(m, gamma, alpha.letters(), DEFAULT_MAX_PREMISES)?;
    Ok(theory.entails_with_witness(alpha))
}

/// `Cn_P(gamma) != For`, decided by whether a fresh letter is P-entailed.
pub fn is_para_consistent(m: &Matrix, gamma: &FormulaSet) -> Result<bool, ParaError> {
    let fresh = Formula::letter(&fresh_letter(&gamma.letters()));
    Ok(!para_entails(m, gamma, &fresh)?.holds)
}

/// Entailment in the logic obtained by applying the transform
/// `spec.para_depth` times to the base matrix.
pub fn logic_entails(
    spec: &LogicSpec,
    gamma: &FormulaSet,
    alpha: &Formula,
) -> Result<bool, ParaError> {
    match spec.para_depth {
        0 => Ok(semantics::entails(&spec.matrix, gamma, alpha).holds),
        1 => {
            Ok(
                ParaTheory::with_bound(&spec.matrix, gamma, alpha.letters(), DEFAULT_MAX_PREMISES)?
                    .entails(alpha),
            )
        }
        d if d <= MAX_PARA_DEPTH => {
            check_bound(gamma, DEFAULT_MAX_PREMISES)?;
            Ok(entails_by_definition(&spec.matrix, gamma, alpha, d))
        }
        d => Err(ParaError::DepthTooLarge(d)),
    }
}

/// `Cn(gamma) != For` in the logic of `spec`.
pub fn logic_consistent(spec: &LogicSpec, gamma: &FormulaSet) -> Result<bool, ParaError> {
    if spec.para_depth == 0 {
        return Ok(semantics::is_consistent(&spec.matrix, gamma));
    }
    let fresh = Formula::letter(&fresh_letter(&gamma.letters()));
    Ok(!logic_entails(spec, gamma, &fresh)?)
}

/// Level-`depth` entailment straight from the definition: level `k` holds
/// for `S` iff some `T ⊆ S` is level-`(k-1)` consistent (does not entail a
/// fresh letter) and level-`(k-1)` entails the conclusion. Each level is a
/// subset-OR transform over the lattice of premise subsets.
///
/// Exponential in `|gamma|`; intended for small premise sets and as an
/// independent route for cross-checking the MSS path.
pub fn entails_by_definition(
    m: &Matrix,
    gamma: &FormulaSet,
    alpha: &Formula,
    depth: usize,
) -> bool {
    let mut letters = gamma.letters();
    letters.extend(alpha.letters());
    let fresh = Formula::letter(&fresh_letter(&letters));
    let domain = Domain::for_formulas(m, gamma.iter().chain([alpha, &fresh]));
    let masks: Vec<ModelSet> = gamma
        .iter()
        .map(|f| domain.models(f).expect("covered"))
        .collect();
    let table = subset_table(&masks, domain.size());
    let target = domain.models(alpha).expect("covered");
    let fresh_models = domain.models(&fresh).expect("covered");

    let mut alpha_level: Vec<bool> = table.iter().map(|s| s.is_subset(&target)).collect();
    let mut fresh_level: Vec<bool> = table.iter().map(|s| s.is_subset(&fresh_models)).collect();
    let n = masks.len();
    for _ in 0..depth {
        let lift = |phi_level: &[bool]| -> Vec<bool> {
            let mut out: Vec<bool> = phi_level
                .iter()
                .zip(&fresh_level)
                .map(|(&e, &f)| e && !f)
                .collect();
            for bit in 0..n {
                for s in 0..out.len() {
                    if s >> bit & 1 == 1 && out[s ^ 1 << bit] {
                        out[s] = true;
                    }
                }
            }
            out
        };
        let next_alpha = lift(&alpha_level);
        let next_fresh = lift(&fresh_level);
        alpha_level = next_alpha;
        fresh_level = next_fresh;
    }
    alpha_level[(1usize << n) - 1]
}
