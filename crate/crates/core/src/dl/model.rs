//! Bounded model search over tiny universes, used to lint terminologies at
//! load time. Finding no model up to the bound is a warning sign, not a proof
//! of unsatisfiability.

use std::collections::{BTreeMap, BTreeSet};

use super::concept::{ConceptExpr, RoleExpr};
use super::terminology::Terminology;

pub const MAX_UNIVERSE: usize = 3;

/// Assignments above this many bits are skipped for a given universe size.
const MAX_BITS: usize = 24;

/// A total interpretation over `{0, .., size-1}` with concepts as bitsets and
/// roles as `size × size` bit matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallModel {
    pub size: usize,
    pub concepts: BTreeMap<String, u8>,
    pub roles: BTreeMap<String, u16>,
}

impl SmallModel {
    fn full(&self) -> u8 {
        ((1u16 << self.size) - 1) as u8
    }

    pub fn concept(&self, name: &str) -> u8 {
        self.concepts.get(name).copied().unwrap_or(0)
    }

    fn atomic_role(&self, name: &str, a: usize, b: usize) -> bool {
        self.roles
            .get(name)
            .is_some_and(|m| m & (1 << (a * self.size + b)) != 0)
    }

    pub fn role_holds(&self, role: &RoleExpr, a: usize, b: usize) -> bool {
        match role {
            RoleExpr::Atomic(n) => self.atomic_role(n, a, b),
            RoleExpr::Inverse(r) => self.role_holds(r, b, a),
            RoleExpr::Union(rs) => rs.iter().any(|r| self.role_holds(r, a, b)),
        }
    }

    /// Set-semantics extension of a concept (defined names must already be
    /// unfolded or interpreted explicitly).
    pub fn extension(&self, c: &ConceptExpr) -> u8 {
        match c {
            ConceptExpr::Top => self.full(),
            ConceptExpr::Atomic(n) => self.concept(n),
            ConceptExpr::Conjunction(ps) => ps.iter().fold(self.full(), |acc, p| acc & self.extension(p)),
            ConceptExpr::Disjunction(ps) => ps.iter().fold(0, |acc, p| acc | self.extension(p)),
            ConceptExpr::Exists(r, f) => {
                let fill = self.extension(f);
                let mut out = 0u8;
                for a in 0..self.size {
                    if (0..self.size).any(|b| fill & (1 << b) != 0 && self.role_holds(r, a, b)) {
                        out |= 1 << a;
                    }
                }
                out
            }
            ConceptExpr::Forall(r, f) => {
                let fill = self.extension(f);
                let mut out = 0u8;
                for a in 0..self.size {
                    if (0..self.size).all(|b| !self.role_holds(r, a, b) || fill & (1 << b) != 0) {
                        out |= 1 << a;
                    }
                }
                out
            }
        }
    }
}

/// Names the search has to interpret for `c`: its own names plus everything
/// reachable through role domain and range declarations.
fn signature(c: &ConceptExpr, t: &Terminology) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut concepts = BTreeSet::new();
    let mut roles = BTreeSet::new();
    c.concept_names(&mut concepts);
    c.role_names(&mut roles);
    let mut pending: Vec<String> = roles.iter().cloned().collect();
    while let Some(r) = pending.pop() {
        if let Some(decl) = t.roles.get(&r) {
            for side in [&decl.domain, &decl.range] {
                let unfolded = t.unfold(side).unwrap_or_else(|_| side.clone());
                unfolded.concept_names(&mut concepts);
                let mut more = BTreeSet::new();
                unfolded.role_names(&mut more);
                for m in more {
                    if roles.insert(m.clone()) {
                        pending.push(m);
                    }
                }
            }
        }
    }
    (concepts, roles)
}

fn respects_role_typing(m: &SmallModel, t: &Terminology) -> bool {
    m.roles.iter().all(|(name, &bits)| {
        let Some(decl) = t.roles.get(name) else {
            return true;
        };
        let dom = m.extension(&t.unfold(&decl.domain).unwrap_or_else(|_| decl.domain.clone()));
        let ran = m.extension(&t.unfold(&decl.range).unwrap_or_else(|_| decl.range.clone()));
        (0..m.size).all(|a| {
            (0..m.size).all(|b| {
                bits & (1 << (a * m.size + b)) == 0 || (dom & (1 << a) != 0 && ran & (1 << b) != 0)
            })
        })
    })
}

/// Searches universes of size 1..=`max_size` for a model of the role typing
/// constraints in which the (unfolded) concept `c` has a non-empty extension.
pub fn find_model(c: &ConceptExpr, t: &Terminology, max_size: usize) -> Option<SmallModel> {
    let (concepts, roles) = signature(c, t);
    let concepts: Vec<String> = concepts.into_iter().collect();
    let roles: Vec<String> = roles.into_iter().collect();
    for size in 1..=max_size.min(MAX_UNIVERSE) {
        let cbits = size;
        let rbits = size * size;
        let total = concepts.len() * cbits + roles.len() * rbits;
        if total > MAX_BITS {
            continue;
        }
        for code in 0u64..(1u64 << total) {
            let mut m = SmallModel {
                size,
                concepts: BTreeMap::new(),
                roles: BTreeMap::new(),
            };
            let mut shift = 0;
            for name in &concepts {
                m.concepts
                    .insert(name.clone(), ((code >> shift) & ((1 << cbits) - 1)) as u8);
                shift += cbits;
            }
            for name in &roles {
                m.roles
                    .insert(name.clone(), ((code >> shift) & ((1 << rbits) - 1)) as u16);
                shift += rbits;
            }
            if m.extension(c) != 0 && respects_role_typing(&m, t) {
                return Some(m);
            }
        }
    }
    None
}
