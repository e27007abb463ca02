//! Propositional language over `~`, `|`, `&`, `->` and letters.

mod generate;
mod parser;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use generate::{enumerate_formulas, formula_count, random_formula, FormulaSampler};
pub use parser::{parse, parse_set, ParseError};

/// A propositional formula.
///
/// Children are reference counted so that enumeration can share subtrees.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Letter(Arc<str>),
    Neg(Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
}

/// The three binary connectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Or,
    And,
    Imp,
}

impl BinOp {
    pub const ALL: [BinOp; 3] = [BinOp::Or, BinOp::And, BinOp::Imp];

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Or => "|",
            BinOp::And => "&",
            BinOp::Imp => "->",
        }
    }
}

impl Formula {
    /// Builds a letter. Panics if `name` is not a valid identifier; use
    /// [`parse`] for untrusted input.
    pub fn letter(name: &str) -> Formula {
        assert!(is_identifier(name), "invalid letter name {name:?}");
        Formula::Letter(Arc::from(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Formula {
        Formula::Neg(Arc::new(self))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Arc::new(self), Arc::new(rhs))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Arc::new(self), Arc::new(rhs))
    }

    pub fn imp(self, rhs: Formula) -> Formula {
        Formula::Imp(Arc::new(self), Arc::new(rhs))
    }

    pub fn binary(op: BinOp, lhs: Formula, rhs: Formula) -> Formula {
        Formula::binary_shared(op, Arc::new(lhs), Arc::new(rhs))
    }

    pub(crate) fn binary_shared(op: BinOp, lhs: Arc<Formula>, rhs: Arc<Formula>) -> Formula {
        match op {
            BinOp::Or => Formula::Or(lhs, rhs),
            BinOp::And => Formula::And(lhs, rhs),
            BinOp::Imp => Formula::Imp(lhs, rhs),
        }
    }

    /// Splits a binary node into its connective and operands.
    pub fn as_binary(&self) -> Option<(BinOp, &Formula, &Formula)> {
        match self {
            Formula::Or(a, b) => Some((BinOp::Or, a, b)),
            Formula::And(a, b) => Some((BinOp::And, a, b)),
            Formula::Imp(a, b) => Some((BinOp::Imp, a, b)),
            _ => None,
        }
    }

    /// Connective nesting depth; letters have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Letter(_) => 0,
            Formula::Neg(a) => 1 + a.depth(),
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Imp(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// The letters occurring in the formula.
    pub fn letters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    pub(crate) fn collect_letters(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Letter(name) => {
                if !out.contains(&**name) {
                    out.insert(name.to_string());
                }
            }
            Formula::Neg(a) => a.collect_letters(out),
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Imp(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
        }
    }

    /// Minimal-parentheses ASCII rendering; `parse(&f.render()) == Ok(f)`.
    pub fn render(&self) -> String {
        self.to_string()
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Neg(_) => 4,
            Formula::Letter(_) => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Formula::Letter(name) => f.write_str(name),
            Formula::Neg(a) => {
                f.write_str("~")?;
                a.fmt_at(f, 4)
            }
            // `->` is right-associative, `|` and `&` left-associative.
            Formula::Imp(a, b) => {
                a.fmt_at(f, 2)?;
                f.write_str(" -> ")?;
                b.fmt_at(f, 1)
            }
            Formula::Or(a, b) => {
                a.fmt_at(f, 2)?;
                f.write_str(" | ")?;
                b.fmt_at(f, 3)
            }
            Formula::And(a, b) => {
                a.fmt_at(f, 3)?;
                f.write_str(" & ")?;
                b.fmt_at(f, 4)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

/// `[a-z][a-zA-Z0-9_]*`
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Returns a letter name not in `used`: `q`, then `q1`, `q2`, ...
pub fn fresh_letter<'a, I>(used: I) -> String
where
    I: IntoIterator<Item = &'a String>,
{
    let used: BTreeSet<&str> = used.into_iter().map(String::as_str).collect();
    if !used.contains("q") {
        return "q".to_string();
    }
    (1..)
        .map(|i| format!("q{i}"))
        .find(|name| !used.contains(name.as_str()))
        .expect("unbounded name supply")
}

/// A finite set of formulas kept in canonical order (rendered-string order),
/// without structural duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FormulaSet {
    items: Vec<Formula>,
}

impl FormulaSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[Formula] {
        &self.items
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.items.contains(f)
    }

    pub fn insert(&mut self, f: Formula) -> bool {
        if self.contains(&f) {
            return false;
        }
        self.items.push(f);
        self.items.sort_by_cached_key(Formula::render);
        true
    }

    pub fn union(&self, other: &FormulaSet) -> FormulaSet {
        self.iter().chain(other.iter()).cloned().collect()
    }

    pub fn is_subset(&self, other: &FormulaSet) -> bool {
        self.iter().all(|f| other.contains(f))
    }

    /// The subset selected by a bit mask over canonical positions.
    pub fn select(&self, mask: u64) -> FormulaSet {
        FormulaSet {
            items: self
                .items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, f)| f.clone())
                .collect(),
        }
    }

    pub fn letters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for f in &self.items {
            f.collect_letters(&mut out);
        }
        out
    }
}

impl FromIterator<Formula> for FormulaSet {
    fn from_iter<T: IntoIterator<Item = Formula>>(iter: T) -> Self {
        let mut items: Vec<Formula> = iter.into_iter().collect();
        items.sort_by_cached_key(Formula::render);
        items.dedup();
        FormulaSet { items }
    }
}

impl<'a> IntoIterator for &'a FormulaSet {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

impl fmt::Display for FormulaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, item) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{item}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for FormulaSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.items.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FormulaSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Vec::<Formula>::deserialize(deserializer)?
            .into_iter()
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn render_examples() {
        let p = Formula::letter("p");
        let q = Formula::letter("q");
        let r = Formula::letter("r");
        assert_eq!(p.clone().imp(q.clone().imp(r)).render(), "p -> q -> r");
        assert_eq!(p.clone().neg().and(q).render(), "~p & q");
        assert_eq!(p.clone().imp(p).neg().render(), "~(p -> p)");
    }

    #[test]
    fn render_parenthesizes_only_when_needed() {
        assert_eq!(f("(p -> q) -> r").render(), "(p -> q) -> r");
        assert_eq!(f("p | (q | r)").render(), "p | (q | r)");
        assert_eq!(f("(p | q) | r").render(), "p | q | r");
        assert_eq!(f("(p & q) | r").render(), "p & q | r");
        assert_eq!(f("p & (q | r)").render(), "p & (q | r)");
        assert_eq!(f("~~p").render(), "~~p");
        assert_eq!(f("~(p & q)").render(), "~(p & q)");
    }

    #[test]
    fn letters_examples() {
        let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(f("p | q").letters(), set(&["p", "q"]));
        assert_eq!(f("~(p -> p)").letters(), set(&["p"]));
        assert_eq!(f("p & (q -> p)").letters(), set(&["p", "q"]));
    }

    #[test]
    fn depth_counts_nesting() {
        assert_eq!(f("p").depth(), 0);
        assert_eq!(f("~p").depth(), 1);
        assert_eq!(f("~(p -> p)").depth(), 2);
        assert_eq!(f("p -> q -> r").depth(), 2);
    }

    #[test]
    fn formula_set_is_canonical() {
        let set: FormulaSet = [f("~p"), f("p"), f("~p"), f("p | q")].into_iter().collect();
        assert_eq!(set.len(), 3);
        assert_eq!(set.to_string(), "{p, p | q, ~p}");
        assert_eq!(set.select(0b101).to_string(), "{p, ~p}");
    }

    #[test]
    fn fresh_letter_avoids_used_names() {
        let used: Vec<String> = vec!["p".into(), "q".into(), "q1".into()];
        assert_eq!(fresh_letter(&used), "q2");
        assert_eq!(fresh_letter(&Vec::<String>::new()), "q");
    }

    #[test]
    fn identifier_rule() {
        assert!(is_identifier("p"));
        assert!(is_identifier("p_1Q"));
        assert!(!is_identifier("P"));
        assert!(!is_identifier("1p"));
        assert!(!is_identifier(""));
    }
}
