//! Translation of description-logic expressions into partial-information
//! formulas. Atomic roles in the user-relation set become ionic formulas
//! whose single justification is the role atom itself.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dl::{ConceptExpr, DlError, RoleExpr, Terminology};
use crate::fil::{fresh_name, Atom, FilFormula, Term};

/// A λ-abstracted formula: one parameter for concepts, two for roles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilLambda {
    pub params: Vec<(String, Option<String>)>,
    pub body: FilFormula,
}

impl FilLambda {
    /// β-reduces with the given arguments.
    ///
    /// # Panics
    /// Panics if the number of arguments differs from the arity.
    pub fn apply(&self, args: &[Term]) -> FilFormula {
        assert_eq!(args.len(), self.params.len(), "arity mismatch");
        let map = self
            .params
            .iter()
            .map(|(v, _)| v.clone())
            .zip(args.iter().cloned())
            .collect();
        self.body.substitute(&map)
    }
}

impl fmt::Display for FilLambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("lambda(")?;
        for (i, (v, _)) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(v)?;
        }
        write!(f, ". {})", self.body)
    }
}

/// A closed formula of the translated theory with a label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedFormula {
    pub name: String,
    pub formula: FilFormula,
}

pub struct Translator<'a> {
    t: &'a Terminology,
    user_rel: BTreeSet<String>,
}

fn var_base(sort: Option<&str>) -> String {
    sort.and_then(|s| s.chars().next())
        .map(|c| c.to_lowercase().to_string())
        .filter(|s| s.chars().all(char::is_alphabetic))
        .unwrap_or_else(|| "x".to_string())
}

impl<'a> Translator<'a> {
    pub fn new(t: &'a Terminology) -> Self {
        Translator {
            user_rel: t.user_rel(),
            t,
        }
    }

    pub fn with_user_rel(t: &'a Terminology, user_rel: BTreeSet<String>) -> Self {
        Translator { t, user_rel }
    }

    pub fn user_rel(&self) -> &BTreeSet<String> {
        &self.user_rel
    }

    pub fn role(&self, r: &RoleExpr) -> Result<FilLambda, DlError> {
        self.t.check_role(r)?;
        let dom = self.t.role_domain(r).and_then(ConceptExpr::head_atom);
        let ran = self.t.role_range(r).and_then(ConceptExpr::head_atom);
        let x = var_base(dom);
        let y = fresh_name(&var_base(ran), &BTreeSet::from([x.clone()]));
        let body = self.role_at(r, &Term::Var(x.clone()), &Term::Var(y.clone()));
        Ok(FilLambda {
            params: vec![(x, dom.map(str::to_string)), (y, ran.map(str::to_string))],
            body,
        })
    }

    pub fn concept(&self, c: &ConceptExpr) -> Result<FilLambda, DlError> {
        self.t.check_concept(c)?;
        let sort = c.head_atom().map(str::to_string);
        let x = var_base(sort.as_deref());
        let mut scope = BTreeSet::from([x.clone()]);
        let body = self.concept_at(c, &Term::Var(x.clone()), &mut scope);
        Ok(FilLambda {
            params: vec![(x, sort)],
            body,
        })
    }

    /// τ(R)(x, y) built directly at the given terms.
    pub fn role_at(&self, r: &RoleExpr, x: &Term, y: &Term) -> FilFormula {
        match r {
            RoleExpr::Atomic(n) => {
                let atom = FilFormula::Atom(Atom::binary(n.clone(), x.clone(), y.clone()));
                if self.user_rel.contains(n) {
                    FilFormula::Ionic {
                        justifications: vec![atom.clone()],
                        conclusion: Box::new(atom),
                    }
                } else {
                    atom
                }
            }
            // same ionic formula, arguments swapped
            RoleExpr::Inverse(inner) => self.role_at(inner, y, x),
            RoleExpr::Union(rs) => FilFormula::Or(rs.iter().map(|r| self.role_at(r, x, y)).collect()),
        }
    }

    /// τ(C)(x) built directly at `x`; `scope` holds the variable names that
    /// must not be reused for new binders.
    pub fn concept_at(&self, c: &ConceptExpr, x: &Term, scope: &mut BTreeSet<String>) -> FilFormula {
        match c {
            ConceptExpr::Top => FilFormula::truth(),
            ConceptExpr::Atomic(n) => FilFormula::Atom(Atom::unary(n.clone(), x.clone())),
            ConceptExpr::Conjunction(ps) => {
                FilFormula::And(ps.iter().map(|p| self.concept_at(p, x, scope)).collect())
            }
            ConceptExpr::Disjunction(ps) => {
                FilFormula::Or(ps.iter().map(|p| self.concept_at(p, x, scope)).collect())
            }
            ConceptExpr::Exists(r, f) | ConceptExpr::Forall(r, f) => {
                let sort = f
                    .head_atom()
                    .or_else(|| self.t.role_range(r).and_then(ConceptExpr::head_atom))
                    .map(str::to_string);
                let y = fresh_name(&var_base(sort.as_deref()), scope);
                scope.insert(y.clone());
                let yt = Term::Var(y.clone());
                let rel = self.role_at(r, x, &yt);
                let fill = self.concept_at(f, &yt, scope);
                scope.remove(&y);
                if matches!(c, ConceptExpr::Exists(..)) {
                    FilFormula::exists(y, sort, FilFormula::And(vec![rel, fill]))
                } else {
                    FilFormula::forall(y, sort, FilFormula::implies(rel, fill))
                }
            }
        }
    }

    /// One universally closed biconditional per definition, then one
    /// implication per synonym target.
    pub fn terminology(&self) -> Vec<NamedFormula> {
        let mut out = Vec::new();
        for (name, body) in &self.t.definitions {
            let x = var_base(body.head_atom());
            let xt = Term::Var(x.clone());
            let mut scope = BTreeSet::from([x.clone()]);
            let rhs = self.concept_at(body, &xt, &mut scope);
            let lhs = FilFormula::Atom(Atom::unary(name.clone(), xt));
            out.push(NamedFormula {
                name: name.clone(),
                formula: FilFormula::forall(x, None, FilFormula::iff(lhs, rhs)),
            });
        }

        let mut targets: Vec<&String> = Vec::new();
        for target in self.t.synonyms.values() {
            if !targets.contains(&target) {
                targets.push(target);
            }
        }
        for target in targets {
            let sources: Vec<&String> = self
                .t
                .synonyms
                .iter()
                .filter(|(_, t)| *t == target)
                .map(|(s, _)| s)
                .collect();
            let is_role = self.t.is_role(target);
            let args: Vec<Term> = if is_role {
                vec![Term::var("x"), Term::var("y")]
            } else {
                vec![Term::var("x")]
            };
            let mut alts: Vec<FilFormula> = sources
                .iter()
                .map(|s| FilFormula::atom((*s).clone(), args.clone()))
                .collect();
            let lhs = if alts.len() == 1 {
                alts.pop().unwrap()
            } else {
                FilFormula::Or(alts)
            };
            let mut formula = FilFormula::implies(lhs, FilFormula::atom(target.clone(), args));
            if is_role {
                formula = FilFormula::forall("y", None, formula);
            }
            out.push(NamedFormula {
                name: format!("synonym:{target}"),
                formula: FilFormula::forall("x", None, formula),
            });
        }
        out
    }
}

pub fn translate_role(
    r: &RoleExpr,
    user_rel: &BTreeSet<String>,
    t: &Terminology,
) -> Result<FilLambda, DlError> {
    Translator::with_user_rel(t, user_rel.clone()).role(r)
}

pub fn translate_concept(c: &ConceptExpr, t: &Terminology) -> Result<FilLambda, DlError> {
    Translator::new(t).concept(c)
}

pub fn translate_terminology(t: &Terminology) -> Vec<NamedFormula> {
    Translator::new(t).terminology()
}

/// The theory as text: one prefix-syntax formula per line.
pub fn render_theory(theory: &[NamedFormula]) -> String {
    theory.iter().map(|n| format!("{}\n", n.formula)).collect()
}
