use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dl::Terminology;
use crate::fil::{ionic_status, Atom, Bindings, FilFormula, IonicStatus, PartialInterpretation, Term, TruthValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoalStatus {
    Open,
    Answered,
    Suggested,
}

/// Missing information: an open justification of an ionic formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Goal {
    pub justification: Atom,
    pub var_sorts: BTreeMap<String, String>,
    pub origin_role: String,
    pub status: GoalStatus,
}

impl Goal {
    /// Identifies the goal within a focus, e.g. `DepartFrom(u,s)`.
    pub fn key(&self) -> String {
        self.justification.to_string()
    }

    pub fn open_vars(&self) -> Vec<&str> {
        self.justification.vars().collect()
    }

    /// Matches `atom` against the justification, returning the bindings of
    /// the goal's variables.
    pub fn match_atom(&self, atom: &Atom) -> Option<BTreeMap<String, String>> {
        if atom.pred != self.justification.pred || atom.args.len() != self.justification.args.len() {
            return None;
        }
        let mut out = BTreeMap::new();
        for (pattern, value) in self.justification.args.iter().zip(&atom.args) {
            let Term::Const(c) = value else {
                return None;
            };
            match pattern {
                Term::Const(p) if p != c => return None,
                Term::Const(_) => {}
                Term::Var(v) => {
                    if out.get(v).is_some_and(|old: &String| old != c) {
                        return None;
                    }
                    out.insert(v.clone(), c.clone());
                }
            }
        }
        Some(out)
    }
}

/// What a walk over a translated target collects.
#[derive(Debug, Clone, Default)]
pub(crate) struct Walk {
    /// Atoms of the formula with every binding found applied.
    pub atoms: Vec<Atom>,
    pub goals: Vec<Goal>,
    pub blocked: Option<FilFormula>,
    /// Bindings found by concluded ionic formulas for variables bound further
    /// out.
    pub concluded: BTreeMap<String, String>,
    pub ionic_seen: usize,
}

fn direct_atoms(body: &FilFormula) -> Vec<&Atom> {
    let parts: Vec<&FilFormula> = match body {
        FilFormula::And(gs) => gs.iter().collect(),
        other => vec![other],
    };
    parts
        .into_iter()
        .filter_map(|g| match g {
            FilFormula::Atom(a) => Some(a),
            _ => None,
        })
        .collect()
}

/// The only constant that makes every direct atom of `body` mentioning `var`
/// true, if there is exactly one.
fn unique_witness(var: &str, body: &FilFormula, b: &Bindings, i: &PartialInterpretation) -> Option<String> {
    let atoms: Vec<&Atom> = direct_atoms(body)
        .into_iter()
        .filter(|a| a.vars().any(|v| v == var))
        .filter(|a| a.vars().all(|v| v == var || b.get(v).is_some()))
        .collect();
    if atoms.is_empty() {
        return None;
    }
    let mut found = None;
    for c in i.universe() {
        let mut trial = b.clone();
        trial.set(var, c);
        let all_true = atoms.iter().all(|a| {
            let args: Option<Vec<String>> = a.args.iter().map(|t| trial.resolve(t).ok()).collect();
            args.is_some_and(|args| i.value(&a.pred, &args) == TruthValue::T)
        });
        if all_true {
            if found.is_some() {
                return None;
            }
            found = Some(c.clone());
        }
    }
    found
}

fn substitute_one(atoms: &mut [Atom], var: &str, c: &str) {
    let map = BTreeMap::from([(var.to_string(), Term::constant(c))]);
    for a in atoms.iter_mut() {
        *a = a.substitute(&map);
    }
}

pub(crate) fn walk(f: &FilFormula, b: &Bindings, i: &PartialInterpretation, out: &mut Walk) {
    match f {
        FilFormula::Atom(a) => out.atoms.push(a.substitute(&b.as_substitution())),
        FilFormula::Not(g) => walk(g, b, i, out),
        FilFormula::And(gs) | FilFormula::Or(gs) => {
            for g in gs {
                walk(g, b, i, out);
            }
        }
        FilFormula::Implies(p, q) | FilFormula::Iff(p, q) => {
            walk(p, b, i, out);
            walk(q, b, i, out);
        }
        FilFormula::Exists { var, sort, body } | FilFormula::Forall { var, sort, body } => {
            let mut inner = b.clone();
            inner.unset(var);
            inner.set_sort(var, sort.as_deref());
            if let Some(c) = unique_witness(var, body, &inner, i) {
                inner.set(var, &c);
            }
            let mut sub = Walk::default();
            walk(body, &inner, i, &mut sub);
            let here = inner
                .get(var)
                .map(str::to_string)
                .or_else(|| sub.concluded.remove(var));
            if let Some(c) = here {
                substitute_one(&mut sub.atoms, var, &c);
            }
            out.atoms.append(&mut sub.atoms);
            out.goals.append(&mut sub.goals);
            out.concluded.append(&mut sub.concluded);
            out.ionic_seen += sub.ionic_seen;
            if out.blocked.is_none() {
                out.blocked = sub.blocked;
            }
        }
        FilFormula::Ionic { conclusion, .. } => {
            out.ionic_seen += 1;
            match ionic_status(f, i, b) {
                IonicStatus::Open(vars) => {
                    let FilFormula::Atom(atom) = conclusion.as_ref() else {
                        return;
                    };
                    let justification = atom.substitute(&b.as_substitution());
                    out.goals.push(Goal {
                        origin_role: justification.pred.clone(),
                        var_sorts: vars
                            .into_iter()
                            .filter_map(|v| v.sort.map(|s| (v.var, s)))
                            .collect(),
                        justification,
                        status: GoalStatus::Open,
                    });
                }
                IonicStatus::Concluded(found) => {
                    let mut full = b.clone();
                    for (v, c) in &found {
                        if b.get(v).is_none() {
                            out.concluded.insert(v.clone(), c.clone());
                        }
                        full.set(v, c);
                    }
                    if let FilFormula::Atom(a) = conclusion.as_ref() {
                        out.atoms.push(a.substitute(&full.as_substitution()));
                    }
                }
                IonicStatus::Blocked(instance) => {
                    if out.blocked.is_none() {
                        out.blocked = Some(instance);
                    }
                }
            }
        }
    }
}

/// The dialog goals of `f` under the shared knowledge: one per open ionic
/// subformula, in traversal order.
pub fn extract_goals(f: &FilFormula, shared: &PartialInterpretation) -> Vec<Goal> {
    let mut out = Walk::default();
    walk(f, &Bindings::new(), shared, &mut out);
    out.goals
}

/// The question text for a goal and the sort the answer should have.
pub fn generate_question(g: &Goal, t: &Terminology) -> (String, Option<String>) {
    let expected = g
        .open_vars()
        .into_iter()
        .find_map(|v| g.var_sorts.get(v).cloned());
    let text = match t.question_templates.get(&g.origin_role) {
        Some(template) => g.var_sorts.iter().fold(template.clone(), |acc, (v, s)| {
            acc.replace(&format!("{{{v}}}"), s)
        }),
        None => {
            let sorts: Vec<&str> = g
                .open_vars()
                .into_iter()
                .map(|v| g.var_sorts.get(v).map(String::as_str).unwrap_or(v))
                .collect();
            format!("Please specify: {} ({}).", g.origin_role, sorts.join(", "))
        }
    };
    (text, expected)
}
