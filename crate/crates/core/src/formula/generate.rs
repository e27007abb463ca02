//! Bounded formula generators: exhaustive enumeration and seeded sampling.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BinOp, Formula, FormulaSet};

fn letter_pool<I, S>(letters: I) -> Vec<Arc<Formula>>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let names: BTreeSet<String> = letters
        .into_iter()
        .map(|s| s.as_ref().to_string())
        .collect();
    assert!(!names.is_empty(), "letter set must be nonempty");
    names.iter().map(|n| Arc::new(Formula::letter(n))).collect()
}

/// Number of formulas of depth at most `max_depth` over `letters` letters.
pub fn formula_count(letters: usize, max_depth: usize) -> u128 {
    let base = letters as u128;
    let mut n = base;
    for _ in 0..max_depth {
        n = base + n + 3 * n * n;
    }
    n
}

/// Every formula over `letters` with depth at most `max_depth`, each exactly
/// once. Order: by depth, then negations before `|`, `&`, `->`, operands in
/// enumeration order.
pub fn enumerate_formulas<I, S>(letters: I, max_depth: usize) -> impl Iterator<Item = Formula>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut below = letter_pool(letters);
    let mut exact_start = 0;
    // All layers but the last are materialized; the last one is streamed.
    for _ in 1..max_depth {
        let next = exact_layer(&below, exact_start).collect::<Vec<_>>();
        exact_start = below.len();
        below.extend(next.into_iter().map(Arc::new));
    }
    let below = Arc::new(below);
    let head = (0..below.len()).map({
        let below = Arc::clone(&below);
        move |i| (*below[i]).clone()
    });
    let tail: Box<dyn Iterator<Item = Formula>> = if max_depth == 0 {
        Box::new(std::iter::empty())
    } else {
        Box::new(SharedLayer::new(below, exact_start))
    };
    head.chain(tail)
}

fn exact_layer(below: &[Arc<Formula>], exact_start: usize) -> impl Iterator<Item = Formula> + '_ {
    let negs = below[exact_start..]
        .iter()
        .map(|f| Formula::Neg(Arc::clone(f)));
    let n = below.len();
    let bins = BinOp::ALL.into_iter().flat_map(move |op| {
        (0..n).flat_map(move |i| {
            (0..n)
                .filter(move |&j| i >= exact_start || j >= exact_start)
                .map(move |j| {
                    Formula::binary_shared(op, Arc::clone(&below[i]), Arc::clone(&below[j]))
                })
        })
    });
    negs.chain(bins)
}

/// Streams the exact-depth layer built on top of `below`.
struct SharedLayer {
    below: Arc<Vec<Arc<Formula>>>,
    exact_start: usize,
    neg_next: usize,
    op: usize,
    i: usize,
    j: usize,
}

impl SharedLayer {
    fn new(below: Arc<Vec<Arc<Formula>>>, exact_start: usize) -> Self {
        SharedLayer {
            neg_next: exact_start,
            below,
            exact_start,
            op: 0,
            i: 0,
            j: 0,
        }
    }
}

impl Iterator for SharedLayer {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        let n = self.below.len();
        if self.neg_next < n {
            let f = Formula::Neg(Arc::clone(&self.below[self.neg_next]));
            self.neg_next += 1;
            return Some(f);
        }
        while self.op < BinOp::ALL.len() {
            while self.i < n {
                while self.j < n {
                    let (i, j) = (self.i, self.j);
                    self.j += 1;
                    if i >= self.exact_start || j >= self.exact_start {
                        return Some(Formula::binary_shared(
                            BinOp::ALL[self.op],
                            Arc::clone(&self.below[i]),
                            Arc::clone(&self.below[j]),
                        ));
                    }
                }
                self.j = 0;
                self.i += 1;
            }
            self.i = 0;
            self.op += 1;
        }
        None
    }
}

/// Seeded sampler of formulas and premise sets.
///
/// At each node the kind (letter, `~`, `|`, `&`, `->`) is chosen uniformly;
/// nodes at the depth limit are letters.
pub struct FormulaSampler {
    letters: Vec<Arc<Formula>>,
    max_depth: usize,
    rng: ChaCha8Rng,
}

impl FormulaSampler {
    pub fn new<I, S>(letters: I, max_depth: usize, seed: u64) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        FormulaSampler {
            letters: letter_pool(letters),
            max_depth,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn formula(&mut self) -> Formula {
        self.formula_within(self.max_depth)
    }

    pub fn formula_within(&mut self, depth: usize) -> Formula {
        let kind = if depth == 0 {
            0
        } else {
            self.rng.gen_range(0..5)
        };
        match kind {
            0 => {
                let i = self.rng.gen_range(0..self.letters.len());
                (*self.letters[i]).clone()
            }
            1 => self.formula_within(depth - 1).neg(),
            k => {
                let lhs = self.formula_within(depth - 1);
                let rhs = self.formula_within(depth - 1);
                Formula::binary(BinOp::ALL[k - 2], lhs, rhs)
            }
        }
    }

    /// A set of `0..=max_size` sampled formulas (duplicates collapse).
    pub fn set(&mut self, max_size: usize) -> FormulaSet {
        let size = self.rng.gen_range(0..=max_size);
        (0..size).map(|_| self.formula()).collect()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// One seeded formula over `letters` with depth at most `max_depth`.
pub fn random_formula<I, S>(letters: I, max_depth: usize, seed: u64) -> Formula
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    FormulaSampler::new(letters, max_depth, seed).formula()
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::formula::parse;

    #[test]
    fn depth_zero_is_the_letters() {
        let all: Vec<_> = enumerate_formulas(["p"], 0).collect();
        assert_eq!(all, vec![Formula::letter("p")]);
    }

    #[test]
    fn one_letter_depth_one() {
        let all: Vec<_> = enumerate_formulas(["p"], 1).collect();
        assert_eq!(all.len(), 5);
        for s in ["p", "~p", "p | p", "p & p", "p -> p"] {
            assert!(all.contains(&parse(s).unwrap()), "{s} missing");
        }
    }

    #[test]
    fn two_letters_depth_one() {
        let all: HashSet<_> = enumerate_formulas(["q", "p"], 1).collect();
        assert_eq!(all.len(), 2 + 2 + 3 * 4);
    }

    #[test]
    fn closed_form_counts() {
        assert_eq!(formula_count(1, 0), 1);
        assert_eq!(formula_count(1, 1), 5);
        assert_eq!(formula_count(1, 2), 81);
        assert_eq!(formula_count(2, 2), 786);
    }

    #[test]
    fn sampler_respects_depth_and_letters() {
        let mut s = FormulaSampler::new(["p", "q"], 3, 7);
        for _ in 0..200 {
            let f = s.formula();
            assert!(f.depth() <= 3);
            assert!(f.letters().iter().all(|l| l == "p" || l == "q"));
        }
    }

    #[test]
    fn random_formula_is_deterministic() {
        assert_eq!(random_formula(["p"], 0, 99), Formula::letter("p"));
        assert_eq!(
            random_formula(["p", "q"], 4, 5),
            random_formula(["p", "q"], 4, 5)
        );
    }
}
