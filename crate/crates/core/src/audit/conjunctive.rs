//! Bounded search for a single formula with the consequences of `{x, y}`.
//!
//! Candidates are scanned as value columns in the order of
//! [`enumerate_formulas`], so a surviving candidate can be rebuilt from its
//! index without materializing the others.

use super::witness::Probe;
use crate::formula::{enumerate_formulas, formula_count, BinOp, Formula, FormulaSet};
use crate::matrix::Matrix;
use crate::para::{logic_entails, LogicSpec};
use crate::semantics::{self, Domain};

/// Largest candidate space the search will scan.
pub(crate) const CANDIDATE_LIMIT: u128 = 2_000_000;

pub(crate) enum Search {
    Refuted { probes: Vec<Probe>, candidates: u64 },
    Survivor(Formula),
}

/// Deepest level at most `wanted` whose candidate count fits the limit.
pub(crate) fn search_depth(letters: usize, wanted: usize) -> usize {
    (0..=wanted)
        .rev()
        .find(|&d| formula_count(letters, d) <= CANDIDATE_LIMIT)
        .unwrap_or(0)
}

/// Calls `visit` on the column of every formula of depth at most
/// `max_depth` over the domain letters until it returns `true`. Returns the
/// number of columns visited and the index of the stopping one.
pub(crate) fn scan(
    domain: &Domain,
    max_depth: usize,
    mut visit: impl FnMut(&[u16]) -> bool,
) -> (u64, Option<u64>) {
    let m = domain.matrix();
    let neg = |col: &[u16]| {
        col.iter()
            .map(|&x| m.neg_index(x as usize) as u16)
            .collect::<Vec<_>>()
    };
    let bin = |op, a: &[u16], b: &[u16], out: &mut Vec<u16>| {
        out.clear();
        out.extend(
            a.iter()
                .zip(b)
                .map(|(&x, &y)| m.binary_index(op, x as usize, y as usize) as u16),
        );
    };

    let mut below: Vec<Vec<u16>> = domain
        .letters()
        .iter()
        .map(|l| domain.column(&Formula::letter(l)).expect("domain letter"))
        .collect();
    let mut exact_start = 0;
    let mut buf = Vec::new();
    for _ in 1..max_depth {
        let n = below.len();
        let mut next: Vec<Vec<u16>> = below[exact_start..].iter().map(|c| neg(c)).collect();
        for op in BinOp::ALL {
            for i in 0..n {
                for j in 0..n {
                    if i >= exact_start || j >= exact_start {
                        bin(op, &below[i], &below[j], &mut buf);
                        next.push(buf.clone());
                    }
                }
            }
        }
        exact_start = n;
        below.extend(next);
    }

    let mut count = 0u64;
    for col in &below {
        if visit(col) {
            return (count + 1, Some(count));
        }
        count += 1;
    }
    if max_depth == 0 {
        return (count, None);
    }
    let n = below.len();
    for col in &below[exact_start..] {
        if visit(&neg(col)) {
            return (count + 1, Some(count));
        }
        count += 1;
    }
    for op in BinOp::ALL {
        for i in 0..n {
            for j in 0..n {
                if i >= exact_start || j >= exact_start {
                    bin(op, &below[i], &below[j], &mut buf);
                    if visit(&buf) {
                        return (count + 1, Some(count));
                    }
                    count += 1;
                }
            }
        }
    }
    (count, None)
}

fn designated(m: &Matrix, col: &[u16]) -> Vec<bool> {
    col.iter()
        .map(|&x| m.is_designated_index(x as usize))
        .collect()
}

/// Whether `{z}` yields a formula with models `target` (and tautology
/// status `valid`) in the logic of `spec`, given the designation pattern
/// of `z`.
///
/// Under the transform the subsets of `{z}` are the empty set, which is
/// consistent at every level and yields exactly the tautologies, and `{z}`
/// itself, which yields the consequences of `z` when `z` is satisfiable.
fn member(depth: usize, z: &[bool], target: &[bool], valid: bool) -> bool {
    let sub = z.iter().zip(target).all(|(&a, &b)| !a || b);
    if depth == 0 {
        sub
    } else {
        valid || (z.iter().any(|&a| a) && sub)
    }
}

/// Scans every candidate `z` over `letters` up to `max_depth`. With
/// `probes`, `z` survives when it agrees with `{x, y}` on every probe;
/// without, when it has exactly the models of `{x, y}`.
pub(crate) fn refute(
    spec: &LogicSpec,
    x: &Formula,
    y: &Formula,
    letters: &[String],
    max_depth: usize,
    probes: Option<&[Formula]>,
) -> Search {
    let m = &spec.matrix;
    let domain = Domain::new(m, letters);
    let pair: FormulaSet = [x.clone(), y.clone()].into_iter().collect();
    let depth = spec.para_depth;

    let (count, stop) = match probes {
        Some(probes) => {
            let targets: Vec<(Vec<bool>, bool, bool)> = probes
                .iter()
                .map(|phi| {
                    let models = designated(m, &domain.column(phi).expect("probe within letters"));
                    let valid = models.iter().all(|&b| b);
                    let want = logic_entails(spec, &pair, phi).expect("two premises");
                    (models, valid, want)
                })
                .collect();
            scan(&domain, max_depth, |col| {
                let z = designated(m, col);
                targets
                    .iter()
                    .all(|(t, valid, want)| member(depth, &z, t, *valid) == *want)
            })
        }
        None => {
            let models = domain.models_of_set(&pair).expect("pair within letters");
            let target: Vec<bool> = (0..domain.size()).map(|i| models.contains(i)).collect();
            scan(&domain, max_depth, |col| designated(m, col) == target)
        }
    };
    match stop {
        Some(index) => Search::Survivor(
            enumerate_formulas(letters, max_depth)
                .nth(index as usize)
                .expect("index within enumeration"),
        ),
        None => Search::Refuted {
            probes: probes
                .unwrap_or_default()
                .iter()
                .map(|phi| Probe {
                    formula: phi.clone(),
                    entailed: logic_entails(spec, &pair, phi).expect("two premises"),
                })
                .collect(),
            candidates: count,
        },
    }
}

/// Compares the column shortcut with full entailment calls on an evenly
/// spread subset of the candidates.
pub(crate) fn cross_check(
    spec: &LogicSpec,
    x: &Formula,
    y: &Formula,
    letters: &[String],
    max_depth: usize,
    probes: Option<&[Formula]>,
) -> bool {
    const CHECKS: u128 = 150;
    let m = &spec.matrix;
    let domain = Domain::new(m, letters);
    let pair: FormulaSet = [x.clone(), y.clone()].into_iter().collect();
    let step = (formula_count(letters.len(), max_depth) / CHECKS).max(1) as usize;
    enumerate_formulas(letters, max_depth)
        .step_by(step)
        .all(|z| {
            let zs: FormulaSet = std::iter::once(z.clone()).collect();
            let zd = designated(m, &domain.column(&z).expect("within letters"));
            match probes {
                Some(probes) => probes.iter().all(|phi| {
                    let t = designated(m, &domain.column(phi).expect("within letters"));
                    let valid = t.iter().all(|&b| b);
                    member(spec.para_depth, &zd, &t, valid)
                        == logic_entails(spec, &zs, phi).expect("one premise")
                }),
                None => {
                    let same = semantics::entails(m, &zs, x).holds
                        && semantics::entails(m, &zs, y).holds
                        && semantics::entails(m, &pair, &z).holds;
                    let target = domain.models_of_set(&pair).expect("within letters");
                    same == zd.iter().enumerate().all(|(i, &d)| d == target.contains(i))
                }
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::matrix::builtin;

    #[test]
    fn scan_matches_enumeration_order() {
        let l3 = builtin("l3").unwrap();
        let letters = vec!["p".to_string(), "q".to_string()];
        let domain = Domain::new(&l3, &letters);
        for depth in 0..=2 {
            let mut cols = Vec::new();
            let (count, stop) = scan(&domain, depth, |c| {
                cols.push(c.to_vec());
                false
            });
            assert_eq!(stop, None);
            assert_eq!(count as u128, formula_count(2, depth));
            let expected: Vec<Vec<u16>> = enumerate_formulas(&letters, depth)
                .map(|f| domain.column(&f).unwrap())
                .collect();
            assert_eq!(cols, expected);
        }
    }

    #[test]
    fn survivor_is_rebuilt_from_its_index() {
        let l3 = builtin("l3").unwrap();
        let letters = vec!["p".to_string(), "q".to_string()];
        let spec = LogicSpec::base(l3);
        match refute(
            &spec,
            &parse("p").unwrap(),
            &parse("q").unwrap(),
            &letters,
            2,
            None,
        ) {
            Search::Survivor(z) => {
                assert!(semantics::entails(&spec.matrix, &parse_set("p, q"), &z).holds);
                assert!(
                    semantics::entails(
                        &spec.matrix,
                        &std::iter::once(z).collect(),
                        &parse("p & q").unwrap()
                    )
                    .holds
                );
            }
            Search::Refuted { .. } => panic!("p & q has the models of {{p, q}}"),
        }
    }

    fn parse_set(s: &str) -> FormulaSet {
        crate::formula::parse_set(s).unwrap()
    }

    #[test]
    fn transformed_pair_has_no_single_equivalent() {
        let spec = LogicSpec::para(builtin("l3").unwrap());
        let letters = vec!["p".to_string(), "q".to_string()];
        let probes: Vec<Formula> = ["p | q", "~p | q", "q"]
            .iter()
            .map(|s| parse(s).unwrap())
            .collect();
        let (x, y) = (parse("p").unwrap(), parse("~p").unwrap());
        match refute(&spec, &x, &y, &letters, 2, Some(&probes)) {
            Search::Refuted { probes, candidates } => {
                assert_eq!(candidates, 786);
                assert_eq!(
                    probes.iter().map(|p| p.entailed).collect::<Vec<_>>(),
                    vec![true, true, false]
                );
            }
            Search::Survivor(z) => panic!("unexpected survivor {z}"),
        }
        assert!(cross_check(&spec, &x, &y, &letters, 2, Some(&probes)));
        assert!(cross_check(
            &LogicSpec::new(spec.matrix.clone(), 2),
            &x,
            &y,
            &letters,
            2,
            Some(&probes)
        ));
    }
}
