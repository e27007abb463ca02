//! Logical matrices `<Val, D, neg, or, and, imp>` with exact rational values.

mod file;
mod value;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::formula::BinOp;

pub use file::{load_matrix, load_matrix_file, MatrixDocument};
pub use value::{Value, ValueTokenError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("unknown matrix `{0}` (expected l3, g3, k3 or cl2)")]
    UnknownMatrix(String),
    #[error("{family} needs at least 2 values, got {n}")]
    TooFewValues { family: &'static str, n: usize },
    #[error("matrix has no values")]
    NoValues,
    #[error("duplicate value {0}")]
    DuplicateValue(Value),
    #[error("designated value {0} is not a value of the matrix")]
    DesignatedNotAValue(Value),
    #[error("designated must be nonempty")]
    DesignatedEmpty,
    #[error("designated must be proper (a strict subset of the values)")]
    DesignatedNotProper,
    #[error("table not total: `{table}` has no entry for {key}")]
    NotTotal { table: &'static str, key: String },
    #[error("table not closed: `{table}` maps {key} to {output}, which is not a value")]
    NotClosed {
        table: &'static str,
        key: String,
        output: Value,
    },
    #[error("unknown key {key} in table `{table}`")]
    UnknownKey { table: &'static str, key: String },
    #[error("malformed binary-table key `{0}` (expected \"x|y\")")]
    BadKey(String),
    #[error(transparent)]
    BadToken(#[from] ValueTokenError),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("cannot read matrix file {path}: {message}")]
    Io { path: String, message: String },
}

pub type UnaryTable = BTreeMap<Value, Value>;
pub type BinaryTable = BTreeMap<(Value, Value), Value>;

/// A finite logical matrix.
///
/// Values are kept in ascending order and the connectives are stored as
/// index tables, so evaluation never touches rational arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    name: String,
    values: Vec<Value>,
    designated: Vec<bool>,
    neg: Vec<usize>,
    // Row-major `n * n` tables indexed by `x * n + y`.
    or: Vec<usize>,
    and: Vec<usize>,
    imp: Vec<usize>,
}

impl Matrix {
    /// Builds and validates a matrix from explicit tables.
    pub fn from_tables(
        name: impl Into<String>,
        values: &[Value],
        designated: &[Value],
        neg: &UnaryTable,
        or: &BinaryTable,
        and: &BinaryTable,
        imp: &BinaryTable,
    ) -> Result<Matrix, MatrixError> {
        if values.is_empty() {
            return Err(MatrixError::NoValues);
        }
        let mut sorted = values.to_vec();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(MatrixError::DuplicateValue(w[0]));
        }
        let index = |v: &Value| sorted.binary_search(v).ok();

        let mut is_designated = vec![false; sorted.len()];
        for d in designated {
            let i = index(d).ok_or(MatrixError::DesignatedNotAValue(*d))?;
            is_designated[i] = true;
        }
        if !is_designated.iter().any(|&d| d) {
            return Err(MatrixError::DesignatedEmpty);
        }
        if is_designated.iter().all(|&d| d) {
            return Err(MatrixError::DesignatedNotProper);
        }

        for key in neg.keys() {
            if index(key).is_none() {
                return Err(MatrixError::UnknownKey {
                    table: "neg",
                    key: key.to_string(),
                });
            }
        }
        let neg_idx = sorted
            .iter()
            .map(|x| {
                let out = neg.get(x).ok_or_else(|| MatrixError::NotTotal {
                    table: "neg",
                    key: x.to_string(),
                })?;
                index(out).ok_or_else(|| MatrixError::NotClosed {
                    table: "neg",
                    key: x.to_string(),
                    output: *out,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;

        let binary = |table: &'static str, map: &BinaryTable| -> Result<Vec<usize>, MatrixError> {
            for (x, y) in map.keys() {
                if index(x).is_none() || index(y).is_none() {
                    return Err(MatrixError::UnknownKey {
                        table,
                        key: format!("{x}|{y}"),
                    });
                }
            }
            let mut out = Vec::with_capacity(sorted.len() * sorted.len());
            for x in &sorted {
                for y in &sorted {
                    let key = format!("{x}|{y}");
                    let v = map.get(&(*x, *y)).ok_or_else(|| MatrixError::NotTotal {
                        table,
                        key: key.clone(),
                    })?;
                    out.push(index(v).ok_or(MatrixError::NotClosed {
                        table,
                        key,
                        output: *v,
                    })?);
                }
            }
            Ok(out)
        };

        Ok(Matrix {
            name: name.into(),
            or: binary("or", or)?,
            and: binary("and", and)?,
            imp: binary("imp", imp)?,
            neg: neg_idx,
            designated: is_designated,
            values: sorted,
        })
    }

    /// Builds a matrix by applying connective functions pointwise.
    pub fn from_fns(
        name: impl Into<String>,
        values: &[Value],
        designated: &[Value],
        neg: impl Fn(Value) -> Value,
        or: impl Fn(Value, Value) -> Value,
        and: impl Fn(Value, Value) -> Value,
        imp: impl Fn(Value, Value) -> Value,
    ) -> Result<Matrix, MatrixError> {
        let unary: UnaryTable = values.iter().map(|&x| (x, neg(x))).collect();
        let tabulate = |f: &dyn Fn(Value, Value) -> Value| -> BinaryTable {
            values
                .iter()
                .flat_map(|&x| values.iter().map(move |&y| ((x, y), f(x, y))))
                .collect()
        };
        Matrix::from_tables(
            name,
            values,
            designated,
            &unary,
            &tabulate(&or),
            &tabulate(&and),
            &tabulate(&imp),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Matrix {
        self.name = name.into();
        self
    }

    /// Values in ascending order.
    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn designated_values(&self) -> Vec<Value> {
        self.values
            .iter()
            .zip(&self.designated)
            .filter(|(_, &d)| d)
            .map(|(v, _)| *v)
            .collect()
    }

    pub fn index_of(&self, v: Value) -> Option<usize> {
        self.values.binary_search(&v).ok()
    }

    pub fn value(&self, index: usize) -> Value {
        self.values[index]
    }

    pub fn is_designated(&self, v: Value) -> bool {
        self.index_of(v).is_some_and(|i| self.designated[i])
    }

    pub fn is_designated_index(&self, i: usize) -> bool {
        self.designated[i]
    }

    pub fn neg_index(&self, i: usize) -> usize {
        self.neg[i]
    }

    pub fn binary_index(&self, op: BinOp, i: usize, j: usize) -> usize {
        let n = self.values.len();
        let table = match op {
            BinOp::Or => &self.or,
            BinOp::And => &self.and,
            BinOp::Imp => &self.imp,
        };
        table[i * n + j]
    }

    /// `f~(x)`, or `None` if `x` is not a value of the matrix.
    pub fn neg(&self, x: Value) -> Option<Value> {
        Some(self.values[self.neg[self.index_of(x)?]])
    }

    pub fn binary(&self, op: BinOp, x: Value, y: Value) -> Option<Value> {
        let (i, j) = (self.index_of(x)?, self.index_of(y)?);
        Some(self.values[self.binary_index(op, i, j)])
    }

    pub fn neg_table(&self) -> UnaryTable {
        self.values
            .iter()
            .map(|&x| (x, self.values[self.neg[self.index_of(x).unwrap()]]))
            .collect()
    }

    pub fn binary_table(&self, op: BinOp) -> BinaryTable {
        let n = self.size();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| {
                (
                    (self.values[i], self.values[j]),
                    self.values[self.binary_index(op, i, j)],
                )
            })
            .collect()
    }

    /// Table-for-table equality, ignoring the name.
    pub fn same_tables(&self, other: &Matrix) -> bool {
        self.values == other.values
            && self.designated == other.designated
            && self.neg == other.neg
            && self.or == other.or
            && self.and == other.and
            && self.imp == other.imp
    }

    /// Condition (*): negation sends every designated value outside the
    /// designated set. Under it no valuation designates both `p` and `~p`.
    pub fn has_star_property(&self) -> bool {
        (0..self.size()).all(|i| !self.designated[i] || !self.designated[self.neg[i]])
    }

    /// Designated values whose negation is also designated.
    pub fn star_violations(&self) -> Vec<Value> {
        (0..self.size())
            .filter(|&i| self.designated[i] && self.designated[self.neg[i]])
            .map(|i| self.values[i])
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |vs: &[Value]| {
            vs.iter()
                .map(Value::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "{} = <{{{}}}, {{{}}}, ~, |, &, ->>",
            self.name,
            join(&self.values),
            join(&self.designated_values())
        )
    }
}

/// `{0, 1/(n-1), ..., 1}`
pub fn evenly_spaced(n: usize) -> Vec<Value> {
    let top = n as i64 - 1;
    (0..=top).map(|k| Value::new(k, top)).collect()
}

/// The n-valued Lukasiewicz matrix: `~x = 1 - x`, `max`, `min`,
/// `x -> y = min(1, 1 - x + y)`, designated `{1}`.
pub fn lukasiewicz(n: usize) -> Result<Matrix, MatrixError> {
    if n < 2 {
        return Err(MatrixError::TooFewValues {
            family: "lukasiewicz",
            n,
        });
    }
    Matrix::from_fns(
        format!("L{n}"),
        &evenly_spaced(n),
        &[Value::ONE],
        Value::complement,
        Ord::max,
        Ord::min,
        |x, y| Value::ONE.min(x.complement().plus(y)),
    )
}

/// The n-valued Goedel matrix: `~x = 1` iff `x = 0`, `max`, `min`,
/// `x -> y = 1` if `x <= y` else `y`, designated `{1}`.
pub fn goedel(n: usize) -> Result<Matrix, MatrixError> {
    if n < 2 {
        return Err(MatrixError::TooFewValues {
            family: "goedel",
            n,
        });
    }
    Matrix::from_fns(
        format!("G{n}"),
        &evenly_spaced(n),
        &[Value::ONE],
        |x| if x.is_zero() { Value::ONE } else { Value::ZERO },
        Ord::max,
        Ord::min,
        |x, y| if x <= y { Value::ONE } else { y },
    )
}

/// `x, y, x|y, x&y, x->y` rows over `{0, 1/2, 1}` or `{0, 1}`.
type Row = (
    &'static str,
    &'static str,
    &'static str,
    &'static str,
    &'static str,
);

fn transcribed(name: &str, values: &[&str], neg: &[(&str, &str)], rows: &[Row]) -> Matrix {
    let v = |s: &str| s.parse::<Value>().expect("literal value");
    let values: Vec<Value> = values.iter().map(|s| v(s)).collect();
    let neg: UnaryTable = neg.iter().map(|(x, y)| (v(x), v(y))).collect();
    let pick = |col: fn(&Row) -> &str| -> BinaryTable {
        rows.iter().map(|r| ((v(r.0), v(r.1)), v(col(r)))).collect()
    };
    Matrix::from_tables(
        name,
        &values,
        &[Value::ONE],
        &neg,
        &pick(|r| r.2),
        &pick(|r| r.3),
        &pick(|r| r.4),
    )
    .expect("built-in tables are valid")
}

const THREE: [&str; 3] = ["0", "1/2", "1"];

fn l3() -> Matrix {
    transcribed(
        "L3",
        &THREE,
        &[("1", "0"), ("1/2", "1/2"), ("0", "1")],
        &[
            ("1", "1", "1", "1", "1"),
            ("1", "1/2", "1", "1/2", "1/2"),
            ("1", "0", "1", "0", "0"),
            ("1/2", "1", "1", "1/2", "1"),
            ("1/2", "1/2", "1/2", "1/2", "1"),
            ("1/2", "0", "1/2", "0", "1/2"),
            ("0", "1", "1", "0", "1"),
            ("0", "1/2", "1/2", "0", "1"),
            ("0", "0", "0", "0", "1"),
        ],
    )
}

fn g3() -> Matrix {
    transcribed(
        "G3",
        &THREE,
        &[("1", "0"), ("1/2", "0"), ("0", "1")],
        &[
            ("1", "1", "1", "1", "1"),
            ("1", "1/2", "1", "1/2", "1/2"),
            ("1", "0", "1", "0", "0"),
            ("1/2", "1", "1", "1/2", "1"),
            ("1/2", "1/2", "1/2", "1/2", "1"),
            ("1/2", "0", "1/2", "0", "0"),
            ("0", "1", "1", "0", "1"),
            ("0", "1/2", "1/2", "0", "1"),
            ("0", "0", "0", "0", "1"),
        ],
    )
}

fn k3() -> Matrix {
    transcribed(
        "K3",
        &THREE,
        &[("1", "0"), ("1/2", "1/2"), ("0", "1")],
        &[
            ("1", "1", "1", "1", "1"),
            ("1", "1/2", "1", "1/2", "1/2"),
            ("1", "0", "1", "0", "0"),
            ("1/2", "1", "1", "1/2", "1"),
            ("1/2", "1/2", "1/2", "1/2", "1/2"),
            ("1/2", "0", "1/2", "0", "1/2"),
            ("0", "1", "1", "0", "1"),
            ("0", "1/2", "1/2", "0", "1"),
            ("0", "0", "0", "0", "1"),
        ],
    )
}

fn cl2() -> Matrix {
    transcribed(
        "CL2",
        &["0", "1"],
        &[("1", "0"), ("0", "1")],
        &[
            ("1", "1", "1", "1", "1"),
            ("1", "0", "1", "0", "0"),
            ("0", "1", "1", "0", "1"),
            ("0", "0", "0", "0", "1"),
        ],
    )
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 4] = ["l3", "g3", "k3", "cl2"];

/// One of the built-in matrices `l3`, `g3`, `k3`, `cl2` (case-insensitive).
pub fn builtin(name: &str) -> Result<Matrix, MatrixError> {
    match name.to_ascii_lowercase().as_str() {
        "l3" => Ok(l3()),
        "g3" => Ok(g3()),
        "k3" => Ok(k3()),
        "cl2" => Ok(cl2()),
        _ => Err(MatrixError::UnknownMatrix(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    #[test]
    fn builtin_spot_values() {
        let l3 = builtin("l3").unwrap();
        let g3 = builtin("g3").unwrap();
        let k3 = builtin("k3").unwrap();
        assert_eq!(
            l3.binary(BinOp::Imp, Value::HALF, Value::ZERO),
            Some(Value::HALF)
        );
        assert_eq!(
            g3.binary(BinOp::Imp, Value::HALF, Value::ZERO),
            Some(Value::ZERO)
        );
        assert_eq!(g3.neg(Value::HALF), Some(Value::ZERO));
        assert_eq!(l3.neg(Value::HALF), Some(Value::HALF));
        assert_eq!(
            k3.binary(BinOp::Imp, Value::HALF, Value::HALF),
            Some(Value::HALF)
        );
        assert!(builtin("L3").is_ok());
        assert!(matches!(builtin("lp"), Err(MatrixError::UnknownMatrix(_))));
    }

    #[test]
    fn families_at_three_match_builtins() {
        assert!(lukasiewicz(3).unwrap().same_tables(&builtin("l3").unwrap()));
        assert!(goedel(3).unwrap().same_tables(&builtin("g3").unwrap()));
        let cl2 = builtin("cl2").unwrap();
        assert!(lukasiewicz(2).unwrap().same_tables(&cl2));
        assert!(goedel(2).unwrap().same_tables(&cl2));
    }

    #[test]
    fn four_valued_spot_values() {
        let l4 = lukasiewicz(4).unwrap();
        assert_eq!(l4.binary(BinOp::Imp, v("2/3"), v("1/3")), Some(v("2/3")));
        let g4 = goedel(4).unwrap();
        assert_eq!(g4.binary(BinOp::Imp, v("2/3"), v("1/3")), Some(v("1/3")));
        assert_eq!(g4.neg(v("1/3")), Some(Value::ZERO));
    }

    #[test]
    fn families_reject_small_n() {
        assert!(matches!(
            lukasiewicz(1),
            Err(MatrixError::TooFewValues { .. })
        ));
        assert!(matches!(goedel(0), Err(MatrixError::TooFewValues { .. })));
    }

    #[test]
    fn families_are_valid_and_agree_on_lattice_ops() {
        for n in 2..=12 {
            let l = lukasiewicz(n).unwrap();
            let g = goedel(n).unwrap();
            assert_eq!(l.size(), n);
            assert_eq!(l.designated_values(), vec![Value::ONE]);
            assert_eq!(l.binary_table(BinOp::Or), g.binary_table(BinOp::Or));
            assert_eq!(l.binary_table(BinOp::And), g.binary_table(BinOp::And));
            assert!(l.has_star_property() && g.has_star_property());
        }
    }

    #[test]
    fn star_property() {
        for name in BUILTIN_NAMES {
            assert!(builtin(name).unwrap().has_star_property(), "{name}");
        }
        let vals = [Value::ZERO, Value::ONE];
        let bad = Matrix::from_fns(
            "bad",
            &vals,
            &[Value::ONE],
            |_| Value::ONE,
            Ord::max,
            Ord::min,
            |_, y| y,
        )
        .unwrap();
        assert!(!bad.has_star_property());
        assert_eq!(bad.star_violations(), vec![Value::ONE]);
    }

    #[test]
    fn validation_errors() {
        let vals = [Value::ZERO, Value::HALF, Value::ONE];
        let id = |x| x;
        let proj = |x, _| x;
        assert_eq!(
            Matrix::from_fns("m", &vals, &vals, id, proj, proj, proj),
            Err(MatrixError::DesignatedNotProper)
        );
        assert_eq!(
            Matrix::from_fns("m", &vals, &[], id, proj, proj, proj),
            Err(MatrixError::DesignatedEmpty)
        );
        assert!(matches!(
            Matrix::from_fns(
                "m",
                &vals,
                &[Value::ONE],
                |_| Value::new(2, 1),
                proj,
                proj,
                proj
            ),
            Err(MatrixError::NotClosed { table: "neg", .. })
        ));
        let mut neg = l3().neg_table();
        neg.remove(&Value::HALF);
        let m = l3();
        let err = Matrix::from_tables(
            "m",
            &vals,
            &[Value::ONE],
            &neg,
            &m.binary_table(BinOp::Or),
            &m.binary_table(BinOp::And),
            &m.binary_table(BinOp::Imp),
        )
        .unwrap_err();
        assert!(err.to_string().contains("table not total"), "{err}");
    }
}
