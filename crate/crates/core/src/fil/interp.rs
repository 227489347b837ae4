use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::formula::{Atom, Term};
use super::FilError;
use crate::dl::FactBase;

/// Strong-Kleene truth values, ordered `F < U < T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TruthValue {
    F,
    U,
    T,
}

impl TruthValue {
    pub const ALL: [TruthValue; 3] = [TruthValue::F, TruthValue::U, TruthValue::T];

    pub fn and(self, other: TruthValue) -> TruthValue {
        self.min(other)
    }

    pub fn or(self, other: TruthValue) -> TruthValue {
        self.max(other)
    }

    pub fn negate(self) -> TruthValue {
        match self {
            TruthValue::T => TruthValue::F,
            TruthValue::F => TruthValue::T,
            TruthValue::U => TruthValue::U,
        }
    }

    pub fn implies(self, other: TruthValue) -> TruthValue {
        self.negate().or(other)
    }

    pub fn iff(self, other: TruthValue) -> TruthValue {
        self.implies(other).and(other.implies(self))
    }

    pub fn is_defined(self) -> bool {
        self != TruthValue::U
    }
}

impl From<bool> for TruthValue {
    fn from(b: bool) -> Self {
        if b {
            TruthValue::T
        } else {
            TruthValue::F
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue::T => "T",
            TruthValue::F => "F",
            TruthValue::U => "U",
        })
    }
}

/// A signed ground atom, used to extend interpretations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub positive: bool,
    pub pred: String,
    pub args: Vec<String>,
}

impl Literal {
    pub fn pos(pred: impl Into<String>, args: &[&str]) -> Self {
        Literal {
            positive: true,
            pred: pred.into(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }

    pub fn neg(pred: impl Into<String>, args: &[&str]) -> Self {
        Literal {
            positive: false,
            ..Literal::pos(pred, args)
        }
    }

    /// The literal for a ground atom, `None` if the atom has variables.
    pub fn from_atom(atom: &Atom, positive: bool) -> Option<Self> {
        let args = atom.ground_args()?;
        Some(Literal {
            positive,
            pred: atom.pred.clone(),
            args: args.into_iter().map(str::to_string).collect(),
        })
    }

    pub fn atom(&self) -> Atom {
        Atom::new(
            self.pred.clone(),
            self.args.iter().map(|a| Term::Const(a.clone())).collect(),
        )
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("-")?;
        }
        write!(f, "{}({})", self.pred, self.args.join(","))
    }
}

type Extension = BTreeMap<String, BTreeSet<Vec<String>>>;

/// A partial interpretation: per predicate, a positive and a negative tuple
/// set over a finite universe. Tuples in neither set are undefined.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialInterpretation {
    universe: BTreeSet<String>,
    plus: Extension,
    minus: Extension,
}

impl PartialInterpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_universe<I, S>(constants: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        PartialInterpretation {
            universe: constants.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    /// Every fact of the fact base as a positive tuple.
    pub fn from_facts(kb: &FactBase) -> Self {
        let mut i = PartialInterpretation::with_universe(kb.individuals().iter().cloned());
        for (a, c) in kb.concept_assertions() {
            i.plus.entry(c.clone()).or_default().insert(vec![a.clone()]);
        }
        for (a, r, b) in kb.role_assertions() {
            i.plus
                .entry(r.clone())
                .or_default()
                .insert(vec![a.clone(), b.clone()]);
        }
        i
    }

    pub fn universe(&self) -> &BTreeSet<String> {
        &self.universe
    }

    pub fn plus(&self, pred: &str) -> impl Iterator<Item = &Vec<String>> {
        self.plus.get(pred).into_iter().flatten()
    }

    pub fn minus(&self, pred: &str) -> impl Iterator<Item = &Vec<String>> {
        self.minus.get(pred).into_iter().flatten()
    }

    pub fn predicates(&self) -> BTreeSet<&str> {
        self.plus
            .keys()
            .chain(self.minus.keys())
            .map(String::as_str)
            .collect()
    }

    pub fn value<S: AsRef<str>>(&self, pred: &str, args: &[S]) -> TruthValue {
        let tuple: Vec<String> = args.iter().map(|a| a.as_ref().to_string()).collect();
        if self.plus.get(pred).is_some_and(|s| s.contains(&tuple)) {
            TruthValue::T
        } else if self.minus.get(pred).is_some_and(|s| s.contains(&tuple)) {
            TruthValue::F
        } else {
            TruthValue::U
        }
    }

    /// Constants `c` with `concept(c)` in the positive set, in order.
    pub fn members(&self, concept: &str) -> Vec<String> {
        self.plus(concept)
            .filter(|t| t.len() == 1)
            .map(|t| t[0].clone())
            .collect()
    }

    pub fn add_constant(&mut self, c: impl Into<String>) {
        self.universe.insert(c.into());
    }

    /// Adds a literal in place.
    pub fn assert_literal(&mut self, lit: &Literal) -> Result<(), FilError> {
        let (same, opposite) = if lit.positive {
            (&mut self.plus, &self.minus)
        } else {
            (&mut self.minus, &self.plus)
        };
        if opposite.get(&lit.pred).is_some_and(|s| s.contains(&lit.args)) {
            return Err(FilError::InconsistentExtension(lit.to_string()));
        }
        same.entry(lit.pred.clone()).or_default().insert(lit.args.clone());
        self.universe.extend(lit.args.iter().cloned());
        Ok(())
    }

    /// A new interpretation extended by `lit`; `self` is untouched.
    pub fn extend(&self, lit: &Literal) -> Result<PartialInterpretation, FilError> {
        let mut j = self.clone();
        j.assert_literal(lit)?;
        Ok(j)
    }

    /// `self ≤ other`: the universe and both tuple sets of every predicate
    /// are included in those of `other`.
    pub fn leq(&self, other: &PartialInterpretation) -> bool {
        fn included(a: &Extension, b: &Extension) -> bool {
            a.iter().all(|(p, tuples)| {
                tuples.is_empty() || b.get(p).is_some_and(|bt| tuples.is_subset(bt))
            })
        }
        self.universe.is_subset(&other.universe)
            && included(&self.plus, &other.plus)
            && included(&self.minus, &other.minus)
    }

    /// Signed literals currently defined, positives first.
    pub fn literals(&self) -> Vec<Literal> {
        let mut out = Vec::new();
        for (positive, ext) in [(true, &self.plus), (false, &self.minus)] {
            for (p, tuples) in ext {
                for t in tuples {
                    out.push(Literal {
                        positive,
                        pred: p.clone(),
                        args: t.clone(),
                    });
                }
            }
        }
        out
    }
}

/// `i ≤ j` in the information ordering.
pub fn interp_leq(i: &PartialInterpretation, j: &PartialInterpretation) -> bool {
    i.leq(j)
}

pub fn extend_interpretation(
    i: &PartialInterpretation,
    literal: &Literal,
) -> Result<PartialInterpretation, FilError> {
    i.extend(literal)
}
