//! Partial-information logic: three-valued evaluation over partial
//! interpretations, and ionic (default) formulas with justification sets.

mod eval;
mod formula;
mod interp;
mod ionic;

use thiserror::Error;

pub use eval::{eval_default, eval_formula, Bindings};
pub use formula::{fresh_name, Atom, FilFormula, Term};
pub use interp::{extend_interpretation, interp_leq, Literal, PartialInterpretation, TruthValue};
pub use ionic::{ionic_status, justification_position, IonicStatus, OpenVar, PositionReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilError {
    #[error("UnboundVariable: {0}")]
    UnboundVariable(String),
    #[error("IonicInClassicalContext: ionic formulas need ionic_status or default evaluation")]
    IonicInClassicalContext,
    #[error("InconsistentExtension: {0} contradicts the interpretation")]
    InconsistentExtension(String),
    #[error("NestedIonic: ionic formulas cannot contain ionic formulas")]
    NestedIonic,
}
