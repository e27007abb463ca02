//! Finite logical-matrix semantics for many-valued propositional logics,
//! the paraconsistentization transform over them, and an auditor for their
//! metalogical properties.

pub mod audit;
pub mod cli;
pub mod formula;
pub mod matrix;
pub mod para;
pub mod semantics;

pub use formula::{parse, parse_set, Formula, FormulaSet};
pub use matrix::{builtin, goedel, lukasiewicz, Matrix, Value};
pub use para::{logic_entails, para_entails, LogicSpec, ParaResult};
pub use semantics::{entails, eval, EntailmentResult, Valuation};
