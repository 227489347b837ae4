use serde::{Deserialize, Serialize};

use super::concept::{ConceptExpr, RoleExpr};
use super::facts::FactBase;
use super::terminology::Terminology;
use super::DlError;

/// Outcome of open-world instance checking. There is no "disproved".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProofStatus {
    Proved,
    Unproved,
}

impl ProofStatus {
    pub fn is_proved(self) -> bool {
        self == ProofStatus::Proved
    }
}

impl From<bool> for ProofStatus {
    fn from(b: bool) -> Self {
        if b {
            ProofStatus::Proved
        } else {
            ProofStatus::Unproved
        }
    }
}

/// Checks whether the fact base supports `a : c`, reading the unfolded
/// concept as a positive existential query rooted at `a`.
///
/// Universal restrictions only look at the successors the fact base knows
/// about, so an individual without successors satisfies every `forall`.
pub fn instance_check(
    a: &str,
    c: &ConceptExpr,
    t: &Terminology,
    kb: &FactBase,
) -> Result<ProofStatus, DlError> {
    let unfolded = t.unfold(c)?;
    if !kb.individuals().contains(a) {
        return Ok(ProofStatus::Unproved);
    }
    Ok(holds(a, &unfolded, kb).into())
}

pub(crate) fn holds(a: &str, c: &ConceptExpr, kb: &FactBase) -> bool {
    match c {
        ConceptExpr::Top => true,
        ConceptExpr::Atomic(n) => kb.has_concept(a, n),
        ConceptExpr::Conjunction(ps) => ps.iter().all(|p| holds(a, p, kb)),
        ConceptExpr::Disjunction(ps) => ps.iter().any(|p| holds(a, p, kb)),
        ConceptExpr::Exists(r, f) => successors(a, r, kb).iter().any(|b| holds(b, f, kb)),
        ConceptExpr::Forall(r, f) => successors(a, r, kb).iter().all(|b| holds(b, f, kb)),
    }
}

pub(crate) fn successors(a: &str, r: &RoleExpr, kb: &FactBase) -> Vec<String> {
    let mut out: Vec<String> = match r {
        RoleExpr::Atomic(n) => kb.successors(a, n).map(str::to_string).collect(),
        RoleExpr::Inverse(inner) => predecessors(a, inner, kb),
        RoleExpr::Union(rs) => rs.iter().flat_map(|r| successors(a, r, kb)).collect(),
    };
    out.sort();
    out.dedup();
    out
}

fn predecessors(b: &str, r: &RoleExpr, kb: &FactBase) -> Vec<String> {
    match r {
        RoleExpr::Atomic(n) => kb.predecessors(b, n).map(str::to_string).collect(),
        RoleExpr::Inverse(inner) => successors(b, inner, kb),
        RoleExpr::Union(rs) => rs.iter().flat_map(|r| predecessors(b, r, kb)).collect(),
    }
}
