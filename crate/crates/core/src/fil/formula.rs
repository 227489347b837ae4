use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::FilError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(n) => Some(n),
            Term::Const(_) => None,
        }
    }

    pub fn as_const(&self) -> Option<&str> {
        match self {
            Term::Const(n) => Some(n),
            Term::Var(_) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A predicate applied to terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            pred: pred.into(),
            args,
        }
    }

    pub fn unary(pred: impl Into<String>, a: Term) -> Self {
        Atom::new(pred, vec![a])
    }

    pub fn binary(pred: impl Into<String>, a: Term, b: Term) -> Self {
        Atom::new(pred, vec![a, b])
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(Term::as_var)
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| !t.is_var())
    }

    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
                    Term::Const(_) => t.clone(),
                })
                .collect(),
        }
    }

    /// Constant names, when the atom is ground.
    pub fn ground_args(&self) -> Option<Vec<&str>> {
        self.args.iter().map(Term::as_const).collect()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.pred)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// First-order formulas over a finite signature plus ionic formulas
/// `ionic(justifications, conclusion)`.
///
/// `And(vec![])` is the constant true and `Or(vec![])` the constant false.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FilFormula {
    Atom(Atom),
    Not(Box<FilFormula>),
    And(Vec<FilFormula>),
    Or(Vec<FilFormula>),
    Implies(Box<FilFormula>, Box<FilFormula>),
    Iff(Box<FilFormula>, Box<FilFormula>),
    Exists {
        var: String,
        sort: Option<String>,
        body: Box<FilFormula>,
    },
    Forall {
        var: String,
        sort: Option<String>,
        body: Box<FilFormula>,
    },
    Ionic {
        justifications: Vec<FilFormula>,
        conclusion: Box<FilFormula>,
    },
}

impl From<Atom> for FilFormula {
    fn from(a: Atom) -> Self {
        FilFormula::Atom(a)
    }
}

impl FilFormula {
    pub fn truth() -> Self {
        FilFormula::And(Vec::new())
    }

    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Self {
        FilFormula::Atom(Atom::new(pred, args))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FilFormula) -> Self {
        FilFormula::Not(Box::new(f))
    }

    pub fn implies(a: FilFormula, b: FilFormula) -> Self {
        FilFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: FilFormula, b: FilFormula) -> Self {
        FilFormula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(var: impl Into<String>, sort: Option<String>, body: FilFormula) -> Self {
        FilFormula::Exists {
            var: var.into(),
            sort,
            body: Box::new(body),
        }
    }

    pub fn forall(var: impl Into<String>, sort: Option<String>, body: FilFormula) -> Self {
        FilFormula::Forall {
            var: var.into(),
            sort,
            body: Box::new(body),
        }
    }

    /// Builds an ionic formula. Justifications and conclusion must themselves
    /// be free of ionic subformulas.
    pub fn ionic(justifications: Vec<FilFormula>, conclusion: FilFormula) -> Result<Self, FilError> {
        if justifications.iter().any(FilFormula::contains_ionic) || conclusion.contains_ionic() {
            return Err(FilError::NestedIonic);
        }
        Ok(FilFormula::Ionic {
            justifications,
            conclusion: Box::new(conclusion),
        })
    }

    pub fn contains_ionic(&self) -> bool {
        self.ionic_count() > 0
    }

    pub fn ionic_count(&self) -> usize {
        match self {
            FilFormula::Atom(_) => 0,
            FilFormula::Not(f) => f.ionic_count(),
            FilFormula::And(fs) | FilFormula::Or(fs) => fs.iter().map(Self::ionic_count).sum(),
            FilFormula::Implies(a, b) | FilFormula::Iff(a, b) => a.ionic_count() + b.ionic_count(),
            FilFormula::Exists { body, .. } | FilFormula::Forall { body, .. } => body.ionic_count(),
            FilFormula::Ionic {
                justifications,
                conclusion,
            } => 1 + justifications.iter().map(Self::ionic_count).sum::<usize>() + conclusion.ionic_count(),
        }
    }

    /// Every ionic subformula in left-to-right traversal order.
    pub fn ionic_nodes(&self) -> Vec<&FilFormula> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if matches!(f, FilFormula::Ionic { .. }) {
                out.push(f);
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a FilFormula)) {
        f(self);
        match self {
            FilFormula::Atom(_) => {}
            FilFormula::Not(g) => g.visit(f),
            FilFormula::And(gs) | FilFormula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            FilFormula::Implies(a, b) | FilFormula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            FilFormula::Exists { body, .. } | FilFormula::Forall { body, .. } => body.visit(f),
            FilFormula::Ionic {
                justifications,
                conclusion,
            } => {
                justifications.iter().for_each(|g| g.visit(f));
                conclusion.visit(f);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            FilFormula::Atom(a) => {
                for v in a.vars() {
                    if !bound.iter().any(|b| b == v) {
                        out.insert(v.to_string());
                    }
                }
            }
            FilFormula::Not(g) => g.collect_free(bound, out),
            FilFormula::And(gs) | FilFormula::Or(gs) => gs.iter().for_each(|g| g.collect_free(bound, out)),
            FilFormula::Implies(a, b) | FilFormula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            FilFormula::Exists { var, body, .. } | FilFormula::Forall { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            FilFormula::Ionic {
                justifications,
                conclusion,
            } => {
                justifications.iter().for_each(|g| g.collect_free(bound, out));
                conclusion.collect_free(bound, out);
            }
        }
    }

    fn all_vars(&self, out: &mut BTreeSet<String>) {
        self.visit(&mut |f| match f {
            FilFormula::Atom(a) => out.extend(a.vars().map(str::to_string)),
            FilFormula::Exists { var, .. } | FilFormula::Forall { var, .. } => {
                out.insert(var.clone());
            }
            _ => {}
        });
    }

    /// Capture-avoiding substitution of free variables.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> FilFormula {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            FilFormula::Atom(a) => FilFormula::Atom(a.substitute(map)),
            FilFormula::Not(g) => FilFormula::not(g.substitute(map)),
            FilFormula::And(gs) => FilFormula::And(gs.iter().map(|g| g.substitute(map)).collect()),
            FilFormula::Or(gs) => FilFormula::Or(gs.iter().map(|g| g.substitute(map)).collect()),
            FilFormula::Implies(a, b) => FilFormula::implies(a.substitute(map), b.substitute(map)),
            FilFormula::Iff(a, b) => FilFormula::iff(a.substitute(map), b.substitute(map)),
            FilFormula::Exists { var, sort, body } | FilFormula::Forall { var, sort, body } => {
                let mut inner = map.clone();
                inner.remove(var);
                let captures = inner.values().any(|t| t.as_var() == Some(var.as_str()));
                let (var, body) = if captures {
                    let mut taken = BTreeSet::new();
                    body.all_vars(&mut taken);
                    taken.extend(inner.values().filter_map(|t| t.as_var().map(str::to_string)));
                    taken.extend(inner.keys().cloned());
                    let fresh = fresh_name(var, &taken);
                    let renamed = body.substitute(&BTreeMap::from([(var.clone(), Term::Var(fresh.clone()))]));
                    (fresh, renamed)
                } else {
                    (var.clone(), (**body).clone())
                };
                let body = Box::new(body.substitute(&inner));
                if matches!(self, FilFormula::Exists { .. }) {
                    FilFormula::Exists {
                        var,
                        sort: sort.clone(),
                        body,
                    }
                } else {
                    FilFormula::Forall {
                        var,
                        sort: sort.clone(),
                        body,
                    }
                }
            }
            FilFormula::Ionic {
                justifications,
                conclusion,
            } => FilFormula::Ionic {
                justifications: justifications.iter().map(|g| g.substitute(map)).collect(),
                conclusion: Box::new(conclusion.substitute(map)),
            },
        }
    }

    /// The connective skeleton with predicates, terms and sorts erased.
    pub fn skeleton(&self) -> String {
        match self {
            FilFormula::Atom(_) => "atom".into(),
            FilFormula::Not(g) => format!("not({})", g.skeleton()),
            FilFormula::And(gs) => format!("and({})", join(gs.iter().map(Self::skeleton))),
            FilFormula::Or(gs) => format!("or({})", join(gs.iter().map(Self::skeleton))),
            FilFormula::Implies(a, b) => format!("implies({},{})", a.skeleton(), b.skeleton()),
            FilFormula::Iff(a, b) => format!("iff({},{})", a.skeleton(), b.skeleton()),
            FilFormula::Exists { body, .. } => format!("exists({})", body.skeleton()),
            FilFormula::Forall { body, .. } => format!("forall({})", body.skeleton()),
            FilFormula::Ionic {
                justifications,
                conclusion,
            } => format!(
                "ionic([{}],{})",
                join(justifications.iter().map(Self::skeleton)),
                conclusion.skeleton()
            ),
        }
    }
}

fn join(parts: impl Iterator<Item = String>) -> String {
    parts.collect::<Vec<_>>().join(",")
}

/// `base`, or `base1`, `base2`, ... whichever is first not in `taken`.
pub fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|c| !taken.contains(c))
        .unwrap()
}

/// Prefix syntax: `and(f, g)`, `exists(x:Sort, f)`, `ionic([f], g)`.
impl fmt::Display for FilFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, items: &[FilFormula]) -> fmt::Result {
            for (i, g) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{g}")?;
            }
            Ok(())
        }
        fn binder(f: &mut fmt::Formatter<'_>, var: &str, sort: &Option<String>) -> fmt::Result {
            match sort {
                Some(s) => write!(f, "{var}:{s}"),
                None => write!(f, "{var}"),
            }
        }
        match self {
            FilFormula::Atom(a) => write!(f, "{a}"),
            FilFormula::Not(g) => write!(f, "not({g})"),
            FilFormula::And(gs) if gs.is_empty() => f.write_str("true"),
            FilFormula::Or(gs) if gs.is_empty() => f.write_str("false"),
            FilFormula::And(gs) => {
                f.write_str("and(")?;
                list(f, gs)?;
                f.write_str(")")
            }
            FilFormula::Or(gs) => {
                f.write_str("or(")?;
                list(f, gs)?;
                f.write_str(")")
            }
            FilFormula::Implies(a, b) => write!(f, "implies({a}, {b})"),
            FilFormula::Iff(a, b) => write!(f, "iff({a}, {b})"),
            FilFormula::Exists { var, sort, body } => {
                f.write_str("exists(")?;
                binder(f, var, sort)?;
                write!(f, ", {body})")
            }
            FilFormula::Forall { var, sort, body } => {
                f.write_str("forall(")?;
                binder(f, var, sort)?;
                write!(f, ", {body})")
            }
            FilFormula::Ionic {
                justifications,
                conclusion,
            } => {
                f.write_str("ionic([")?;
                list(f, justifications)?;
                write!(f, "], {conclusion})")
            }
        }
    }
}
