//! Conjunctive queries over a fact base, behind a pluggable backend trait.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dl::{is_identifier, DlError, FactBase};
use crate::fil::{Atom, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Dl(#[from] DlError),
    #[error("QuerySyntax: {0}")]
    Syntax(String),
}

/// Variable → constant, total over the answer variables of a query.
pub type SolverBinding = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjunctiveQuery {
    pub atoms: Vec<Atom>,
    pub answer_vars: Vec<String>,
}

impl ConjunctiveQuery {
    /// A query answering for every variable, in order of first appearance.
    pub fn new(atoms: Vec<Atom>) -> Self {
        let mut answer_vars: Vec<String> = Vec::new();
        for a in &atoms {
            for v in a.vars() {
                if !answer_vars.iter().any(|x| x == v) {
                    answer_vars.push(v.to_string());
                }
            }
        }
        ConjunctiveQuery { atoms, answer_vars }
    }

    /// Parses `At(t,x) & From(t,Milan) & To(t,Rome)`.
    ///
    /// An argument is a constant when it starts with an upper-case letter or
    /// a digit, or names an individual of `kb`; `?name` is always a variable.
    pub fn parse(src: &str, kb: &FactBase) -> Result<Self, SolverError> {
        let mut atoms = Vec::new();
        for part in src.split(['&', '∧']) {
            atoms.push(parse_query_atom(part.trim(), kb)?);
        }
        Ok(ConjunctiveQuery::new(atoms))
    }
}

impl fmt::Display for ConjunctiveQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(Atom::to_string).collect();
        f.write_str(&parts.join(" & "))
    }
}

fn parse_query_atom(s: &str, kb: &FactBase) -> Result<Atom, SolverError> {
    let err = |m: &str| SolverError::Syntax(format!("{m} in `{s}`"));
    let (pred, rest) = s.split_once('(').ok_or_else(|| err("expected '('"))?;
    let inner = rest.strip_suffix(')').ok_or_else(|| err("expected ')'"))?;
    let pred = pred.trim();
    if !is_identifier(pred) {
        return Err(err("bad predicate name"));
    }
    let mut args = Vec::new();
    for raw in inner.split(',') {
        let raw = raw.trim();
        let (forced_var, name) = match raw.strip_prefix('?') {
            Some(n) => (true, n),
            None => (false, raw),
        };
        if !is_identifier(name) {
            return Err(err("bad argument"));
        }
        let starts_const = name.starts_with(|c: char| c.is_uppercase() || c.is_ascii_digit());
        args.push(if !forced_var && (starts_const || kb.individuals().contains(name)) {
            Term::constant(name)
        } else {
            Term::var(name)
        });
    }
    Ok(Atom::new(pred, args))
}

/// A backend answering conjunctive queries.
pub trait ProblemSolver: Send + Sync {
    fn eval_query(&self, q: &ConjunctiveQuery) -> Result<Vec<SolverBinding>, SolverError>;
}

/// The reference backend: joins over an in-memory fact base.
#[derive(Debug, Clone, Default)]
pub struct TimetableSolver {
    facts: FactBase,
}

impl TimetableSolver {
    pub fn new(facts: FactBase) -> Self {
        TimetableSolver { facts }
    }

    pub fn facts(&self) -> &FactBase {
        &self.facts
    }
}

impl ProblemSolver for TimetableSolver {
    fn eval_query(&self, q: &ConjunctiveQuery) -> Result<Vec<SolverBinding>, SolverError> {
        eval_query(q, &self.facts)
    }
}

fn candidates(a: &Atom, b: &BTreeMap<String, String>, kb: &FactBase) -> Vec<Vec<String>> {
    let resolve = |t: &Term| match t {
        Term::Const(c) => Some(c.clone()),
        Term::Var(v) => b.get(v).cloned(),
    };
    match a.args.as_slice() {
        [x] => match resolve(x) {
            Some(c) if kb.has_concept(&c, &a.pred) => vec![vec![c]],
            Some(_) => vec![],
            None => kb.members(&a.pred).map(|m| vec![m.to_string()]).collect(),
        },
        [x, y] => match (resolve(x), resolve(y)) {
            (Some(s), Some(o)) if kb.has_role(&s, &a.pred, &o) => vec![vec![s, o]],
            (Some(_), Some(_)) => vec![],
            (Some(s), None) => kb
                .successors(&s, &a.pred)
                .map(|o| vec![s.clone(), o.to_string()])
                .collect(),
            (None, Some(o)) => kb
                .predecessors(&o, &a.pred)
                .map(|s| vec![s.to_string(), o.clone()])
                .collect(),
            (None, None) => kb
                .role_assertions()
                .iter()
                .filter(|(_, r, _)| r == &a.pred)
                .map(|(s, _, o)| vec![s.clone(), o.clone()])
                .collect(),
        },
        _ => vec![],
    }
}

fn join(
    atoms: &[Atom],
    b: &mut BTreeMap<String, String>,
    kb: &FactBase,
    answer_vars: &[String],
    out: &mut BTreeSet<Vec<String>>,
) {
    let Some((first, rest)) = atoms.split_first() else {
        out.insert(answer_vars.iter().map(|v| b[v].clone()).collect());
        return;
    };
    for tuple in candidates(first, b, kb) {
        let mut added = Vec::new();
        let mut ok = true;
        for (t, c) in first.args.iter().zip(&tuple) {
            if let Term::Var(v) = t {
                match b.get(v) {
                    Some(existing) if existing != c => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        b.insert(v.clone(), c.clone());
                        added.push(v.clone());
                    }
                }
            }
        }
        if ok {
            join(rest, b, kb, answer_vars, out);
        }
        for v in added {
            b.remove(&v);
        }
    }
}

/// Every assignment making all atoms facts, projected on the answer
/// variables, deduplicated and ordered by the answer tuple.
pub fn eval_query(q: &ConjunctiveQuery, facts: &FactBase) -> Result<Vec<SolverBinding>, SolverError> {
    for a in &q.atoms {
        if !facts.is_declared(&a.pred) {
            return Err(DlError::UndefinedName(a.pred.clone()).into());
        }
    }
    let mut rows = BTreeSet::new();
    join(&q.atoms, &mut BTreeMap::new(), facts, &q.answer_vars, &mut rows);
    Ok(rows
        .into_iter()
        .map(|row| q.answer_vars.iter().cloned().zip(row).collect())
        .collect())
}

/// Tab-separated rendering: a header of variable names, then one row per
/// binding.
pub fn render_rows(q: &ConjunctiveQuery, rows: &[SolverBinding]) -> String {
    let mut out = q.answer_vars.join("\t");
    out.push('\n');
    for r in rows {
        let vals: Vec<&str> = q.answer_vars.iter().map(|v| r[v].as_str()).collect();
        out.push_str(&vals.join("\t"));
        out.push('\n');
    }
    out
}
