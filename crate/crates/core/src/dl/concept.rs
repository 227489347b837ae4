use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Role expressions of the definitional fragment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RoleExpr {
    Atomic(String),
    Inverse(Box<RoleExpr>),
    Union(Vec<RoleExpr>),
}

impl RoleExpr {
    pub fn atomic(name: impl Into<String>) -> Self {
        RoleExpr::Atomic(name.into())
    }

    /// Builds the inverse, collapsing a double inverse back to the role itself.
    pub fn inverse(self) -> Self {
        match self {
            RoleExpr::Inverse(inner) => *inner,
            other => RoleExpr::Inverse(Box::new(other)),
        }
    }

    /// # Panics
    /// Panics on an empty list; unions are never empty.
    pub fn union(parts: Vec<RoleExpr>) -> Self {
        assert!(!parts.is_empty(), "role union must not be empty");
        if parts.len() == 1 {
            return parts.into_iter().next().unwrap();
        }
        RoleExpr::Union(parts)
    }

    /// Atomic role names mentioned anywhere in the expression.
    pub fn role_names(&self, out: &mut BTreeSet<String>) {
        match self {
            RoleExpr::Atomic(n) => {
                out.insert(n.clone());
            }
            RoleExpr::Inverse(r) => r.role_names(out),
            RoleExpr::Union(rs) => rs.iter().for_each(|r| r.role_names(out)),
        }
    }
}

impl fmt::Display for RoleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoleExpr::Atomic(n) => write!(f, "{n}"),
            RoleExpr::Inverse(r) => write!(f, "inv({r})"),
            RoleExpr::Union(rs) => {
                write!(f, "union(")?;
                for (i, r) in rs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{r}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Concept expressions: atoms, ⊓, ⊔, ∃R.C, ∀R.C and ⊤. There is no negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConceptExpr {
    Top,
    Atomic(String),
    Conjunction(Vec<ConceptExpr>),
    Disjunction(Vec<ConceptExpr>),
    Exists(RoleExpr, Box<ConceptExpr>),
    Forall(RoleExpr, Box<ConceptExpr>),
}

impl ConceptExpr {
    pub fn atomic(name: impl Into<String>) -> Self {
        ConceptExpr::Atomic(name.into())
    }

    pub fn exists(role: RoleExpr, filler: ConceptExpr) -> Self {
        ConceptExpr::Exists(role, Box::new(filler))
    }

    pub fn forall(role: RoleExpr, filler: ConceptExpr) -> Self {
        ConceptExpr::Forall(role, Box::new(filler))
    }

    /// n-ary conjunction, flattening nested conjunctions. A single part is
    /// returned as is.
    ///
    /// # Panics
    /// Panics on an empty list.
    pub fn and(parts: Vec<ConceptExpr>) -> Self {
        assert!(!parts.is_empty(), "conjunction must not be empty");
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                ConceptExpr::Conjunction(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            ConceptExpr::Conjunction(flat)
        }
    }

    /// n-ary disjunction, flattening nested disjunctions.
    ///
    /// # Panics
    /// Panics on an empty list.
    pub fn or(parts: Vec<ConceptExpr>) -> Self {
        assert!(!parts.is_empty(), "disjunction must not be empty");
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                ConceptExpr::Disjunction(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            ConceptExpr::Disjunction(flat)
        }
    }

    /// Top-level conjuncts; a non-conjunction is its own single conjunct.
    pub fn conjuncts(&self) -> &[ConceptExpr] {
        match self {
            ConceptExpr::Conjunction(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }

    /// First atomic name among the top-level conjuncts, if any.
    pub fn head_atom(&self) -> Option<&str> {
        self.conjuncts().iter().find_map(|c| match c {
            ConceptExpr::Atomic(n) => Some(n.as_str()),
            _ => None,
        })
    }

    pub fn concept_names(&self, out: &mut BTreeSet<String>) {
        match self {
            ConceptExpr::Top => {}
            ConceptExpr::Atomic(n) => {
                out.insert(n.clone());
            }
            ConceptExpr::Conjunction(ps) | ConceptExpr::Disjunction(ps) => {
                ps.iter().for_each(|p| p.concept_names(out))
            }
            ConceptExpr::Exists(_, c) | ConceptExpr::Forall(_, c) => c.concept_names(out),
        }
    }

    pub fn role_names(&self, out: &mut BTreeSet<String>) {
        match self {
            ConceptExpr::Top | ConceptExpr::Atomic(_) => {}
            ConceptExpr::Conjunction(ps) | ConceptExpr::Disjunction(ps) => {
                ps.iter().for_each(|p| p.role_names(out))
            }
            ConceptExpr::Exists(r, c) | ConceptExpr::Forall(r, c) => {
                r.role_names(out);
                c.role_names(out);
            }
        }
    }

    pub fn mentions_role_in(&self, roles: &BTreeSet<String>) -> bool {
        let mut names = BTreeSet::new();
        self.role_names(&mut names);
        names.iter().any(|n| roles.contains(n))
    }

    /// Applies `f` to every atomic concept name.
    pub fn map_atoms(&self, f: &impl Fn(&str) -> String) -> ConceptExpr {
        match self {
            ConceptExpr::Top => ConceptExpr::Top,
            ConceptExpr::Atomic(n) => ConceptExpr::Atomic(f(n)),
            ConceptExpr::Conjunction(ps) => {
                ConceptExpr::Conjunction(ps.iter().map(|p| p.map_atoms(f)).collect())
            }
            ConceptExpr::Disjunction(ps) => {
                ConceptExpr::Disjunction(ps.iter().map(|p| p.map_atoms(f)).collect())
            }
            ConceptExpr::Exists(r, c) => ConceptExpr::Exists(r.clone(), Box::new(c.map_atoms(f))),
            ConceptExpr::Forall(r, c) => ConceptExpr::Forall(r.clone(), Box::new(c.map_atoms(f))),
        }
    }
}

impl fmt::Display for ConceptExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(c: &ConceptExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match c {
                ConceptExpr::Conjunction(_) | ConceptExpr::Disjunction(_) => write!(f, "({c})"),
                _ => write!(f, "{c}"),
            }
        }
        match self {
            ConceptExpr::Top => write!(f, "Top"),
            ConceptExpr::Atomic(n) => write!(f, "{n}"),
            ConceptExpr::Conjunction(ps) | ConceptExpr::Disjunction(ps) => {
                let sep = if matches!(self, ConceptExpr::Conjunction(_)) {
                    " and "
                } else {
                    " or "
                };
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    operand(p, f)?;
                }
                Ok(())
            }
            ConceptExpr::Exists(r, c) => {
                write!(f, "exists {r}.")?;
                operand(c, f)
            }
            ConceptExpr::Forall(r, c) => {
                write!(f, "forall {r}.")?;
                operand(c, f)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_inverse_normalizes() {
        let r = RoleExpr::atomic("DepartFrom");
        assert_eq!(r.clone().inverse().inverse(), r);
    }

    #[test]
    fn conjunction_flattens() {
        let c = ConceptExpr::and(vec![
            ConceptExpr::atomic("A"),
            ConceptExpr::and(vec![ConceptExpr::atomic("B"), ConceptExpr::atomic("C")]),
        ]);
        assert_eq!(c.conjuncts().len(), 3);
        assert_eq!(ConceptExpr::and(vec![ConceptExpr::atomic("A")]), ConceptExpr::atomic("A"));
    }

    #[test]
    fn display_round_trips_through_domain_syntax() {
        let c = ConceptExpr::and(vec![
            ConceptExpr::exists(RoleExpr::atomic("DepartFrom").inverse(), ConceptExpr::atomic("User")),
            ConceptExpr::atomic("Station"),
        ]);
        assert_eq!(c.to_string(), "exists inv(DepartFrom).User and Station");
    }
}
