use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::eval::{eval_formula, Bindings};
use super::formula::FilFormula;
use super::interp::{PartialInterpretation, TruthValue};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenVar {
    pub var: String,
    pub sort: Option<String>,
}

/// Where an ionic formula stands under a partial interpretation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum IonicStatus {
    /// The conclusion holds by default; carries bindings for every free
    /// variable of the formula.
    Concluded(BTreeMap<String, String>),
    /// Some justification is false however its variables are completed.
    Blocked(FilFormula),
    /// Justification variables that the interpretation cannot bind.
    Open(Vec<OpenVar>),
}

/// Candidate constants for a variable: the positive members of its sort, or
/// the whole universe when it has none.
pub(crate) fn domain_of(var: &str, i: &PartialInterpretation, b: &Bindings) -> Vec<String> {
    match b.sort_of(var) {
        Some(sort) => i
            .members(sort)
            .into_iter()
            .filter(|c| i.universe().contains(c))
            .collect(),
        None => i.universe().iter().cloned().collect(),
    }
}

/// All assignments of `vars` over their domains, in lexicographic order.
pub(crate) fn completions(
    vars: &[String],
    i: &PartialInterpretation,
    b: &Bindings,
) -> Vec<BTreeMap<String, String>> {
    let mut out = vec![BTreeMap::new()];
    for v in vars {
        let dom = domain_of(v, i, b);
        out = out
            .into_iter()
            .flat_map(|partial| {
                dom.iter().map(move |c| {
                    let mut next = partial.clone();
                    next.insert(v.clone(), c.clone());
                    next
                })
            })
            .collect();
    }
    out
}

fn extend(b: &Bindings, sigma: &BTreeMap<String, String>) -> Bindings {
    let mut out = b.clone();
    for (v, c) in sigma {
        out.set(v, c);
    }
    out
}

fn value(f: &FilFormula, i: &PartialInterpretation, b: &Bindings) -> TruthValue {
    // justifications are ionic-free and fully bound here
    eval_formula(f, i, b).unwrap_or(TruthValue::U)
}

/// Classifies an ionic formula `ionic(Φ, ξ)` under `i` and `b`.
///
/// A justification that is false for every completion of its unbound
/// variables blocks the formula. Otherwise, if some variables cannot be bound
/// by a completion making every justification that mentions them true, the
/// formula is open on those variables. Otherwise it is concluded; bound
/// justifications only need to be not false.
///
/// A non-ionic `f` is read as `ionic([], f)`.
pub fn ionic_status(f: &FilFormula, i: &PartialInterpretation, b: &Bindings) -> IonicStatus {
    let (justifications, conclusion) = match f {
        FilFormula::Ionic {
            justifications,
            conclusion,
        } => (justifications.as_slice(), conclusion.as_ref()),
        other => (&[][..], other),
    };

    let free: BTreeSet<String> = justifications
        .iter()
        .chain(std::iter::once(conclusion))
        .flat_map(FilFormula::free_vars)
        .collect();
    let unbound: Vec<String> = free.iter().filter(|v| b.get(v).is_none()).cloned().collect();

    let unbound_of = |phi: &FilFormula| -> Vec<String> {
        phi.free_vars().into_iter().filter(|v| b.get(v).is_none()).collect()
    };

    for phi in justifications {
        let vars = unbound_of(phi);
        let sigmas = completions(&vars, i, b);
        if sigmas.is_empty() {
            continue;
        }
        if sigmas
            .iter()
            .all(|s| value(phi, i, &extend(b, s)) == TruthValue::F)
        {
            let witness = extend(b, &sigmas[0]);
            return IonicStatus::Blocked(phi.substitute(&witness.as_substitution()));
        }
    }

    let open = || {
        IonicStatus::Open(
            unbound
                .iter()
                .map(|v| OpenVar {
                    var: v.clone(),
                    sort: b.sort_of(v).map(str::to_string),
                })
                .collect(),
        )
    };

    let mentioned: BTreeSet<String> = justifications.iter().flat_map(unbound_of).collect();
    if unbound.iter().any(|v| !mentioned.contains(v)) {
        return open();
    }

    let needing_witness: Vec<&FilFormula> = justifications
        .iter()
        .filter(|phi| !unbound_of(phi).is_empty())
        .collect();
    let witness = completions(&unbound, i, b).into_iter().find(|s| {
        let full = extend(b, s);
        needing_witness
            .iter()
            .all(|phi| value(phi, i, &full) == TruthValue::T)
    });
    match witness {
        Some(sigma) => {
            let full = extend(b, &sigma);
            IonicStatus::Concluded(
                free.iter()
                    .filter_map(|v| full.get(v).map(|c| (v.clone(), c.to_string())))
                    .collect(),
            )
        }
        None => open(),
    }
}

/// Acceptance value of a justification set and the four positions derived
/// from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionReport {
    pub value: TruthValue,
    pub accepted: bool,
    pub inacceptable: bool,
    pub not_acceptable: bool,
    pub not_inacceptable: bool,
}

impl PositionReport {
    pub fn from_value(value: TruthValue) -> Self {
        PositionReport {
            value,
            accepted: value == TruthValue::T,
            inacceptable: value == TruthValue::F,
            not_acceptable: value != TruthValue::T,
            not_inacceptable: value != TruthValue::F,
        }
    }
}

/// Evaluates the conjunction of `justifications`. Unbound variables make the
/// value undefined rather than failing.
pub fn justification_position(
    justifications: &[FilFormula],
    i: &PartialInterpretation,
    b: &Bindings,
) -> PositionReport {
    let conj = FilFormula::And(justifications.to_vec());
    PositionReport::from_value(value(&conj, i, b))
}
