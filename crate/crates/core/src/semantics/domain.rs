use std::collections::{BTreeMap, BTreeSet};

use super::{SemanticsError, Valuation};
use crate::formula::{Formula, FormulaSet};
use crate::matrix::Matrix;

/// Upper bound on `|values|^|letters|` for a single domain.
pub const MAX_VALUATIONS: usize = 1 << 24;

/// A set of valuations of a [`Domain`], stored as a bitset over valuation
/// indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModelSet {
    words: Vec<u64>,
    len: usize,
}

impl ModelSet {
    pub fn empty(len: usize) -> Self {
        ModelSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut set = ModelSet {
            words: vec![u64::MAX; len.div_ceil(64)],
            len,
        };
        if !len.is_multiple_of(64) {
            if let Some(last) = set.words.last_mut() {
                *last = (1u64 << (len % 64)) - 1;
            }
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersect_with(&mut self, other: &ModelSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn intersection(&self, other: &ModelSet) -> ModelSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn is_subset(&self, other: &ModelSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &ModelSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Smallest index in `self` but not in `other`.
    pub fn first_outside(&self, other: &ModelSet) -> Option<usize> {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find(|(_, (a, b))| *a & !*b != 0)
            .map(|(w, (a, b))| w * 64 + (a & !b).trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }
}

/// All valuations of a matrix over an ordered finite letter set.
///
/// Valuation `i` assigns letter `k` the value with index equal to the k-th
/// base-`n` digit of `i`, most significant first; with values ascending
/// this is the odometer order with the last letter varying fastest.
#[derive(Debug, Clone)]
pub struct Domain<'m> {
    matrix: &'m Matrix,
    letters: Vec<String>,
    position: BTreeMap<String, usize>,
    size: usize,
}

impl<'m> Domain<'m> {
    /// # Panics
    ///
    /// If the domain would exceed [`MAX_VALUATIONS`] valuations.
    pub fn new<I, S>(matrix: &'m Matrix, letters: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters
            .into_iter()
            .map(Into::into)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let size = letters
            .iter()
            .try_fold(1usize, |acc, _| acc.checked_mul(matrix.size()))
            .filter(|&s| s <= MAX_VALUATIONS)
            .unwrap_or_else(|| {
                panic!(
                    "{} letters over {} values exceed {MAX_VALUATIONS} valuations",
                    letters.len(),
                    matrix.size()
                )
            });
        let position = letters
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Domain {
            matrix,
            letters,
            position,
            size,
        }
    }

    /// The domain over the letters of `gamma` and `extra`.
    pub fn for_formulas<'a>(
        matrix: &'m Matrix,
        formulas: impl IntoIterator<Item = &'a Formula>,
    ) -> Self {
        let mut letters = BTreeSet::new();
        for f in formulas {
            f.collect_letters(&mut letters);
        }
        Domain::new(matrix, letters)
    }

    pub fn matrix(&self) -> &'m Matrix {
        self.matrix
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn contains_letter(&self, letter: &str) -> bool {
        self.position.contains_key(letter)
    }

    /// Number of valuations.
    pub fn size(&self) -> usize {
        self.size
    }

    fn digit(&self, index: usize, letter_pos: usize) -> usize {
        let n = self.matrix.size();
        let shift = self.letters.len() - 1 - letter_pos;
        index / n.pow(shift as u32) % n
    }

    pub fn valuation(&self, index: usize) -> Valuation {
        Valuation::from_iter(
            self.letters
                .iter()
                .enumerate()
                .map(|(pos, l)| (l.clone(), self.matrix.value(self.digit(index, pos)))),
        )
    }

    /// Index of `v` restricted to this domain's letters.
    pub fn index_of(&self, v: &Valuation) -> Result<usize, SemanticsError> {
        let n = self.matrix.size();
        self.letters.iter().try_fold(0usize, |acc, l| {
            let value = v
                .get(l)
                .ok_or_else(|| SemanticsError::UnassignedLetter(l.clone()))?;
            let digit = self
                .matrix
                .index_of(value)
                .ok_or_else(|| SemanticsError::NotAValue {
                    letter: l.clone(),
                    value: value.to_string(),
                })?;
            Ok(acc * n + digit)
        })
    }

    /// Value indices of `f` under every valuation of the domain.
    pub fn column(&self, f: &Formula) -> Result<Vec<u16>, SemanticsError> {
        match f {
            Formula::Letter(name) => {
                let pos = *self
                    .position
                    .get(&**name)
                    .ok_or_else(|| SemanticsError::UnassignedLetter(name.to_string()))?;
                Ok((0..self.size).map(|i| self.digit(i, pos) as u16).collect())
            }
            Formula::Neg(a) => {
                let mut col = self.column(a)?;
                for x in &mut col {
                    *x = self.matrix.neg_index(*x as usize) as u16;
                }
                Ok(col)
            }
            _ => {
                let (op, a, b) = f.as_binary().expect("binary node");
                let mut lhs = self.column(a)?;
                let rhs = self.column(b)?;
                for (x, &y) in lhs.iter_mut().zip(&rhs) {
                    *x = self.matrix.binary_index(op, *x as usize, y as usize) as u16;
                }
                Ok(lhs)
            }
        }
    }

    /// `Mod(f)` within the domain.
    pub fn models(&self, f: &Formula) -> Result<ModelSet, SemanticsError> {
        let col = self.column(f)?;
        let mut set = ModelSet::empty(self.size);
        for (i, &x) in col.iter().enumerate() {
            if self.matrix.is_designated_index(x as usize) {
                set.insert(i);
            }
        }
        Ok(set)
    }

    /// `Mod(gamma)` within the domain; the empty set yields every valuation.
    pub fn models_of<'a>(
        &self,
        gamma: impl IntoIterator<Item = &'a Formula>,
    ) -> Result<ModelSet, SemanticsError> {
        let mut acc = ModelSet::full(self.size);
        for f in gamma {
            acc.intersect_with(&self.models(f)?);
        }
        Ok(acc)
    }

    pub fn models_of_set(&self, gamma: &FormulaSet) -> Result<ModelSet, SemanticsError> {
        self.models_of(gamma.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::matrix::{builtin, Value};

    #[test]
    fn model_set_basics() {
        let mut a = ModelSet::empty(70);
        a.insert(3);
        a.insert(65);
        let full = ModelSet::full(70);
        assert_eq!(full.count(), 70);
        assert!(a.is_subset(&full));
        assert!(!full.is_subset(&a));
        assert_eq!(full.first_outside(&a), Some(0));
        assert_eq!(a.first_outside(&full), None);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![3, 65]);
        assert!(ModelSet::full(0).is_empty());
    }

    #[test]
    fn valuation_order_is_odometer() {
        let l3 = builtin("l3").unwrap();
        let d = Domain::new(&l3, ["q", "p"]);
        assert_eq!(d.size(), 9);
        let first = d.valuation(0);
        let second = d.valuation(1);
        assert_eq!(first.get("p"), Some(Value::ZERO));
        assert_eq!(second.get("q"), Some(Value::HALF));
        assert_eq!(second.get("p"), Some(Value::ZERO));
        for i in 0..9 {
            assert_eq!(d.index_of(&d.valuation(i)).unwrap(), i);
        }
    }

    #[test]
    fn unassigned_letters_are_errors() {
        let l3 = builtin("l3").unwrap();
        let d = Domain::new(&l3, ["p"]);
        assert_eq!(
            d.models(&parse("p & q").unwrap()),
            Err(SemanticsError::UnassignedLetter("q".into()))
        );
    }
}
