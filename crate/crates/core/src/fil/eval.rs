use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::formula::{Atom, FilFormula, Term};
use super::interp::{PartialInterpretation, TruthValue};
use super::ionic::{ionic_status, IonicStatus};
use super::FilError;

/// Variable assignment plus the sorts declared for variables in scope.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bindings {
    values: BTreeMap<String, String>,
    sorts: BTreeMap<String, String>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, var: impl Into<String>, constant: impl Into<String>) -> Self {
        self.values.insert(var.into(), constant.into());
        self
    }

    pub fn with_sort(mut self, var: impl Into<String>, sort: impl Into<String>) -> Self {
        self.sorts.insert(var.into(), sort.into());
        self
    }

    pub fn set(&mut self, var: &str, constant: &str) {
        self.values.insert(var.to_string(), constant.to_string());
    }

    pub fn unset(&mut self, var: &str) {
        self.values.remove(var);
    }

    pub fn set_sort(&mut self, var: &str, sort: Option<&str>) {
        match sort {
            Some(s) => {
                self.sorts.insert(var.to_string(), s.to_string());
            }
            None => {
                self.sorts.remove(var);
            }
        }
    }

    pub fn get(&self, var: &str) -> Option<&str> {
        self.values.get(var).map(String::as_str)
    }

    pub fn sort_of(&self, var: &str) -> Option<&str> {
        self.sorts.get(var).map(String::as_str)
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn resolve(&self, t: &Term) -> Result<String, FilError> {
        match t {
            Term::Const(c) => Ok(c.clone()),
            Term::Var(v) => self
                .get(v)
                .map(str::to_string)
                .ok_or_else(|| FilError::UnboundVariable(v.clone())),
        }
    }

    /// The substitution `var ↦ Const(value)` for every bound variable.
    pub fn as_substitution(&self) -> BTreeMap<String, Term> {
        self.values
            .iter()
            .map(|(v, c)| (v.clone(), Term::Const(c.clone())))
            .collect()
    }
}

fn eval_atom(a: &Atom, i: &PartialInterpretation, b: &Bindings) -> Result<TruthValue, FilError> {
    let args = a
        .args
        .iter()
        .map(|t| b.resolve(t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(i.value(&a.pred, &args))
}

/// How ionic subformulas are treated during evaluation.
#[derive(Clone, Copy, PartialEq, Eq)]
enum IonicMode {
    Reject,
    Default,
}

/// Strong-Kleene evaluation of an ionic-free formula. Quantifiers range over
/// the whole universe of `i`; sorts on binders do not restrict them.
pub fn eval_formula(
    f: &FilFormula,
    i: &PartialInterpretation,
    b: &Bindings,
) -> Result<TruthValue, FilError> {
    eval(f, i, &mut b.clone(), IonicMode::Reject)
}

/// Evaluation that also gives ionic subformulas a value: a concluded ionic
/// formula makes its conclusion true unless the conclusion is already
/// defined, a blocked one leaves the conclusion as it is, an open one is
/// undefined.
pub fn eval_default(
    f: &FilFormula,
    i: &PartialInterpretation,
    b: &Bindings,
) -> Result<TruthValue, FilError> {
    eval(f, i, &mut b.clone(), IonicMode::Default)
}

fn eval(
    f: &FilFormula,
    i: &PartialInterpretation,
    b: &mut Bindings,
    mode: IonicMode,
) -> Result<TruthValue, FilError> {
    Ok(match f {
        FilFormula::Atom(a) => eval_atom(a, i, b)?,
        FilFormula::Not(g) => eval(g, i, b, mode)?.negate(),
        FilFormula::And(gs) => {
            let mut acc = TruthValue::T;
            for g in gs {
                acc = acc.and(eval(g, i, b, mode)?);
            }
            acc
        }
        FilFormula::Or(gs) => {
            let mut acc = TruthValue::F;
            for g in gs {
                acc = acc.or(eval(g, i, b, mode)?);
            }
            acc
        }
        FilFormula::Implies(p, q) => eval(p, i, b, mode)?.implies(eval(q, i, b, mode)?),
        FilFormula::Iff(p, q) => eval(p, i, b, mode)?.iff(eval(q, i, b, mode)?),
        FilFormula::Exists { var, sort, body } | FilFormula::Forall { var, sort, body } => {
            let existential = matches!(f, FilFormula::Exists { .. });
            let saved_value = b.get(var).map(str::to_string);
            let saved_sort = b.sort_of(var).map(str::to_string);
            b.set_sort(var, sort.as_deref());
            let mut acc = if existential { TruthValue::F } else { TruthValue::T };
            let mut result = Ok(());
            for c in i.universe() {
                b.set(var, c);
                match eval(body, i, b, mode) {
                    Ok(v) => acc = if existential { acc.or(v) } else { acc.and(v) },
                    Err(e) => {
                        result = Err(e);
                        break;
                    }
                }
            }
            match saved_value {
                Some(v) => b.set(var, &v),
                None => b.unset(var),
            }
            b.set_sort(var, saved_sort.as_deref());
            result?;
            acc
        }
        FilFormula::Ionic { conclusion, .. } => match mode {
            IonicMode::Reject => return Err(FilError::IonicInClassicalContext),
            IonicMode::Default => match ionic_status(f, i, b) {
                IonicStatus::Concluded(found) => {
                    let mut inner = b.clone();
                    for (v, c) in &found {
                        inner.set(v, c);
                    }
                    match eval(conclusion, i, &mut inner, IonicMode::Reject)? {
                        TruthValue::U => TruthValue::T,
                        v => v,
                    }
                }
                IonicStatus::Blocked(_) => match eval(conclusion, i, b, IonicMode::Reject) {
                    Ok(v) => v,
                    Err(FilError::UnboundVariable(_)) => TruthValue::U,
                    Err(e) => return Err(e),
                },
                IonicStatus::Open(_) => TruthValue::U,
            },
        },
    })
}
