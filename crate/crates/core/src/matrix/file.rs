//! JSON matrix documents.
//!
//! ```json
//! { "name": "L3",
//!   "values": ["0", "1/2", "1"],
//!   "designated": ["1"],
//!   "neg": {"0": "1", "1/2": "1/2", "1": "0"},
//!   "or":  {"0|0": "0", "0|1/2": "1/2", ...},
//!   "and": {...}, "imp": {...} }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BinaryTable, Matrix, MatrixError, UnaryTable, Value};
use crate::formula::BinOp;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub name: String,
    pub values: Vec<String>,
    pub designated: Vec<String>,
    pub neg: BTreeMap<String, String>,
    pub or: BTreeMap<String, String>,
    pub and: BTreeMap<String, String>,
    pub imp: BTreeMap<String, String>,
}

impl MatrixDocument {
    pub fn from_matrix(m: &Matrix) -> Self {
        let strings = |vs: &[Value]| vs.iter().map(Value::to_string).collect();
        let binary = |op| {
            m.binary_table(op)
                .into_iter()
                .map(|((x, y), z)| (format!("{x}|{y}"), z.to_string()))
                .collect()
        };
        MatrixDocument {
            name: m.name().to_string(),
            values: strings(m.values()),
            designated: strings(&m.designated_values()),
            neg: m
                .neg_table()
                .into_iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect(),
            or: binary(BinOp::Or),
            and: binary(BinOp::And),
            imp: binary(BinOp::Imp),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix, MatrixError> {
        let token = |s: &String| s.parse::<Value>().map_err(MatrixError::from);
        let values = self
            .values
            .iter()
            .map(token)
            .collect::<Result<Vec<_>, _>>()?;
        let designated = self
            .designated
            .iter()
            .map(token)
            .collect::<Result<Vec<_>, _>>()?;
        let neg: UnaryTable = self
            .neg
            .iter()
            .map(|(x, y)| Ok((token(x)?, token(y)?)))
            .collect::<Result<_, MatrixError>>()?;
        let binary = |table: &BTreeMap<String, String>| -> Result<BinaryTable, MatrixError> {
            table
                .iter()
                .map(|(key, out)| {
                    let (x, y) = key
                        .split_once('|')
                        .ok_or_else(|| MatrixError::BadKey(key.clone()))?;
                    Ok(((x.parse()?, y.parse()?), token(out)?))
                })
                .collect()
        };
        Matrix::from_tables(
            self.name.clone(),
            &values,
            &designated,
            &neg,
            &binary(&self.or)?,
            &binary(&self.and)?,
            &binary(&self.imp)?,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

/// Parses and validates a matrix document.
pub fn load_matrix(document: &str) -> Result<Matrix, MatrixError> {
    let doc: MatrixDocument =
        serde_json::from_str(document).map_err(|e| MatrixError::Schema(e.to_string()))?;
    doc.to_matrix()
}

pub fn load_matrix_file(path: impl AsRef<Path>) -> Result<Matrix, MatrixError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| MatrixError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    load_matrix(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{builtin, goedel};

    #[test]
    fn documents_round_trip() {
        for m in [builtin("k3").unwrap(), goedel(5).unwrap()] {
            let text = MatrixDocument::from_matrix(&m).to_json();
            assert_eq!(load_matrix(&text).unwrap(), m);
        }
    }

    fn l3_doc() -> MatrixDocument {
        MatrixDocument::from_matrix(&builtin("l3").unwrap())
    }

    #[test]
    fn rejects_improper_designated_set() {
        let mut doc = l3_doc();
        doc.designated = doc.values.clone();
        let err = doc.to_matrix().unwrap_err();
        assert!(err.to_string().contains("designated must be proper"));
    }

    #[test]
    fn rejects_partial_tables() {
        let mut doc = l3_doc();
        doc.neg.remove("1/2");
        assert!(doc
            .to_matrix()
            .unwrap_err()
            .to_string()
            .contains("table not total"));
        let mut doc = l3_doc();
        doc.imp.remove("0|1");
        assert!(matches!(
            doc.to_matrix(),
            Err(MatrixError::NotTotal { table: "imp", .. })
        ));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_tokens() {
        let mut doc = l3_doc();
        doc.or.insert("2|0".into(), "0".into());
        assert!(doc.to_matrix().is_err());
        let mut doc = l3_doc();
        doc.or.insert("1/2".into(), "0".into());
        assert!(matches!(doc.to_matrix(), Err(MatrixError::BadKey(_))));
        let mut doc = l3_doc();
        doc.values[1] = "0.5".into();
        assert!(matches!(doc.to_matrix(), Err(MatrixError::BadToken(_))));
        let mut json: serde_json::Value = serde_json::from_str(&l3_doc().to_json()).unwrap();
        json["iff"] = serde_json::json!({});
        assert!(matches!(
            load_matrix(&json.to_string()),
            Err(MatrixError::Schema(_))
        ));
        assert!(matches!(
            load_matrix("{\"name\": \"x\"}"),
            Err(MatrixError::Schema(_))
        ));
    }
}
