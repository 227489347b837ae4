//! Definitional description logic: concept syntax, terminologies, fact
//! bases and open-world instance checking.

mod concept;
mod facts;
pub mod model;
mod reasoner;
mod syntax;
mod terminology;

use thiserror::Error;

pub use concept::{ConceptExpr, RoleExpr};
pub use facts::{load_facts, parse_facts, FactBase};
pub use reasoner::{instance_check, ProofStatus};
pub use syntax::{parse_concept, parse_role};
pub(crate) use syntax::is_identifier;
pub use terminology::{load_terminology, RoleDecl, Terminology};
pub(crate) use terminology::strip_comment;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DlError {
    #[error("SyntaxError on line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("UndefinedName: {0}")]
    UndefinedName(String),
    #[error("CyclicTerminology: {}", .0.join(" -> "))]
    CyclicTerminology(Vec<String>),
    #[error("UnsatisfiableDefinition: {0}")]
    UnsatisfiableDefinition(String),
}

/// Names the roles that are sources of missing information.
pub fn compute_user_rel(t: &Terminology) -> std::collections::BTreeSet<String> {
    t.user_rel()
}

/// Unfolds `c` against `t` until only base concept names remain.
pub fn unfold(c: &ConceptExpr, t: &Terminology) -> Result<ConceptExpr, DlError> {
    t.unfold(c)
}
