//! Discourse representation structures: referents plus atomic conditions,
//! optionally abstracted over parameters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dl::{instance_check, ConceptExpr, DlError, FactBase, Terminology};
use crate::fil::{fresh_name, Atom, FilFormula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DrsError {
    #[error("SortMismatch: {value} is not a {sort}")]
    SortMismatch { value: String, sort: String },
    #[error("no parameter left to apply")]
    NoParameter,
    #[error(transparent)]
    Dl(#[from] DlError),
}

/// A discourse referent: a variable, or a named individual the discourse
/// talks about.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Referent {
    pub term: Term,
    pub sort: Option<String>,
}

impl Referent {
    pub fn var(name: impl Into<String>, sort: Option<&str>) -> Self {
        Referent {
            term: Term::var(name),
            sort: sort.map(str::to_string),
        }
    }

    pub fn constant(name: impl Into<String>, sort: Option<&str>) -> Self {
        Referent {
            term: Term::constant(name),
            sort: sort.map(str::to_string),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Drs {
    pub referents: Vec<Referent>,
    pub conditions: Vec<Atom>,
}

impl Drs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.referents.is_empty() && self.conditions.is_empty()
    }

    /// Adds a referent unless one with the same term is already present.
    pub fn add_referent(&mut self, r: Referent) {
        if !self.referents.iter().any(|x| x.term == r.term) {
            self.referents.push(r);
        }
    }

    /// Adds a condition unless it is already present.
    pub fn add_condition(&mut self, a: Atom) {
        if !self.conditions.contains(&a) {
            self.conditions.push(a);
        }
    }

    pub fn var_referents(&self) -> impl Iterator<Item = (&str, Option<&str>)> {
        self.referents
            .iter()
            .filter_map(|r| r.term.as_var().map(|v| (v, r.sort.as_deref())))
    }

    /// Every variable name occurring in referents or conditions.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.var_referents().map(|(v, _)| v.to_string()).collect();
        for c in &self.conditions {
            out.extend(c.vars().map(str::to_string));
        }
        out
    }

    pub fn sort_of(&self, term: &Term) -> Option<&str> {
        self.referents
            .iter()
            .find(|r| &r.term == term)
            .and_then(|r| r.sort.as_deref())
    }

    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Drs {
        let mut out = Drs::new();
        for r in &self.referents {
            let term = match &r.term {
                Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| r.term.clone()),
                c => c.clone(),
            };
            out.add_referent(Referent {
                term,
                sort: r.sort.clone(),
            });
        }
        for c in &self.conditions {
            out.add_condition(c.substitute(map));
        }
        out
    }

    /// Union of both structures; variables of `other` that clash with
    /// variables of `self` are renamed first.
    pub fn merge(&self, other: &Drs) -> Drs {
        let mine = self.vars();
        let mut taken: BTreeSet<String> = mine.union(&other.vars()).cloned().collect();
        let mut renaming = BTreeMap::new();
        for v in other.vars() {
            if mine.contains(&v) {
                let base: String = v.trim_end_matches(|c: char| c.is_ascii_digit()).to_string();
                let fresh = fresh_name(&base, &taken);
                taken.insert(fresh.clone());
                renaming.insert(v, Term::Var(fresh));
            }
        }
        let renamed = other.substitute(&renaming);
        let mut out = self.clone();
        for r in renamed.referents {
            out.add_referent(r);
        }
        for c in renamed.conditions {
            out.add_condition(c);
        }
        out
    }

    /// The existential closure of the conditions over the variable
    /// referents, outermost first.
    pub fn to_fil(&self) -> FilFormula {
        let mut body = match self.conditions.as_slice() {
            [one] => FilFormula::Atom(one.clone()),
            many => FilFormula::And(many.iter().cloned().map(FilFormula::Atom).collect()),
        };
        let vars: Vec<(&str, Option<&str>)> = self.var_referents().collect();
        for (v, sort) in vars.into_iter().rev() {
            body = FilFormula::exists(v, sort.map(str::to_string), body);
        }
        body
    }

    fn referent_line(&self) -> String {
        self.referents
            .iter()
            .map(|r| r.term.name().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Box notation: referent line, a rule, then one condition per line.
    pub fn render_box(&self) -> String {
        let mut lines = vec![self.referent_line()];
        let conds: Vec<String> = self.conditions.iter().map(Atom::to_string).collect();
        let width = lines
            .iter()
            .chain(conds.iter())
            .map(|l| l.chars().count())
            .max()
            .unwrap_or(0)
            .max(1);
        lines.push("-".repeat(width));
        lines.extend(conds);
        let edge = format!("+{}+", "-".repeat(width + 2));
        let mut out = String::new();
        out.push_str(&edge);
        out.push('\n');
        for (i, l) in lines.iter().enumerate() {
            if i == 1 {
                out.push_str(&format!("|-{}-|\n", l));
            } else {
                out.push_str(&format!("| {:<width$} |\n", l));
            }
        }
        out.push_str(&edge);
        out
    }
}

impl fmt::Display for Drs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let conds: Vec<String> = self.conditions.iter().map(Atom::to_string).collect();
        write!(f, "[{} | {}]", self.referent_line(), conds.join(", "))
    }
}

pub fn merge(a: &Drs, b: &Drs) -> Drs {
    a.merge(b)
}

pub fn drs_to_fil(d: &Drs) -> FilFormula {
    d.to_fil()
}

/// A DRS waiting for arguments, such as the questioned time of a
/// wh-question.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaDrs {
    pub params: Vec<(String, Option<String>)>,
    pub body: Drs,
}

impl LambdaDrs {
    pub fn closed(body: Drs) -> Self {
        LambdaDrs {
            params: Vec::new(),
            body,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.params.is_empty()
    }

    /// Substitutes `arg` for the first parameter. A constant argument must be
    /// provably of the parameter's sort.
    pub fn apply(
        &self,
        arg: &Term,
        t: &Terminology,
        kb: &FactBase,
    ) -> Result<LambdaDrs, DrsError> {
        let ((param, sort), rest) = self.params.split_first().ok_or(DrsError::NoParameter)?;
        if let (Term::Const(c), Some(sort)) = (arg, sort) {
            let concept = ConceptExpr::atomic(sort.clone());
            if !instance_check(c, &concept, t, kb)?.is_proved() {
                return Err(DrsError::SortMismatch {
                    value: c.clone(),
                    sort: sort.clone(),
                });
            }
        }
        let mut body = self.body.clone();
        if let Term::Var(v) = arg {
            // keep a variable argument from being captured by a referent
            if body.var_referents().any(|(r, _)| r == v) {
                let mut taken = body.vars();
                taken.extend(self.params.iter().map(|(p, _)| p.clone()));
                let fresh = fresh_name(v, &taken);
                body = body.substitute(&BTreeMap::from([(v.clone(), Term::Var(fresh))]));
            }
        }
        let body = body.substitute(&BTreeMap::from([(param.clone(), arg.clone())]));
        Ok(LambdaDrs {
            params: rest.to_vec(),
            body,
        })
    }

    pub fn apply_all(
        &self,
        args: &[Term],
        t: &Terminology,
        kb: &FactBase,
    ) -> Result<LambdaDrs, DrsError> {
        args.iter()
            .try_fold(self.clone(), |acc, a| acc.apply(a, t, kb))
    }

    /// The closure of the body; parameters stay free.
    pub fn to_fil(&self) -> FilFormula {
        self.body.to_fil()
    }

    pub fn render_box(&self) -> String {
        if self.params.is_empty() {
            return self.body.render_box();
        }
        format!("{}\n{}", self.lambda_prefix(), self.body.render_box())
    }

    fn lambda_prefix(&self) -> String {
        let ps: Vec<&str> = self.params.iter().map(|(p, _)| p.as_str()).collect();
        format!("lambda {}.", ps.join(","))
    }
}

impl fmt::Display for LambdaDrs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.params.is_empty() {
            write!(f, "{}", self.lambda_prefix())?;
        }
        write!(f, "{}", self.body)
    }
}
