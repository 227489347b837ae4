use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::syntax::is_identifier;
use super::terminology::{strip_comment, Terminology};
use super::DlError;

/// Assertional knowledge: concept and role memberships of named individuals.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactBase {
    individuals: BTreeSet<String>,
    concept_assertions: BTreeSet<(String, String)>,
    /// (subject, role, object)
    role_assertions: BTreeSet<(String, String, String)>,
    /// (object, role, subject), kept in step with `role_assertions`
    #[serde(skip)]
    inverse_index: BTreeSet<(String, String, String)>,
    /// Declared predicate names when loaded against a terminology.
    signature: Option<BTreeSet<String>>,
}

impl FactBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_signature(names: impl IntoIterator<Item = String>) -> Self {
        FactBase {
            signature: Some(names.into_iter().collect()),
            ..Default::default()
        }
    }

    pub fn add_individual(&mut self, a: &str) {
        self.individuals.insert(a.to_string());
    }

    pub fn assert_concept(&mut self, a: &str, concept: &str) {
        self.add_individual(a);
        self.concept_assertions.insert((a.to_string(), concept.to_string()));
    }

    pub fn assert_role(&mut self, a: &str, role: &str, b: &str) {
        self.add_individual(a);
        self.add_individual(b);
        self.role_assertions
            .insert((a.to_string(), role.to_string(), b.to_string()));
        self.inverse_index
            .insert((b.to_string(), role.to_string(), a.to_string()));
    }

    /// Copy of `self` extended with everything in `other`.
    pub fn union(&self, other: &FactBase) -> FactBase {
        let mut out = self.clone();
        for a in &other.individuals {
            out.add_individual(a);
        }
        for (a, c) in &other.concept_assertions {
            out.assert_concept(a, c);
        }
        for (a, r, b) in &other.role_assertions {
            out.assert_role(a, r, b);
        }
        if let (Some(mine), Some(theirs)) = (&mut out.signature, &other.signature) {
            mine.extend(theirs.iter().cloned());
        }
        out
    }

    pub fn individuals(&self) -> &BTreeSet<String> {
        &self.individuals
    }

    pub fn concept_assertions(&self) -> &BTreeSet<(String, String)> {
        &self.concept_assertions
    }

    pub fn role_assertions(&self) -> &BTreeSet<(String, String, String)> {
        &self.role_assertions
    }

    pub fn has_concept(&self, a: &str, concept: &str) -> bool {
        self.concept_assertions
            .contains(&(a.to_string(), concept.to_string()))
    }

    pub fn has_role(&self, a: &str, role: &str, b: &str) -> bool {
        self.role_assertions
            .contains(&(a.to_string(), role.to_string(), b.to_string()))
    }

    pub fn successors<'a>(&'a self, a: &'a str, role: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        Self::scan(&self.role_assertions, a, role)
    }

    pub fn predecessors<'a>(&'a self, b: &'a str, role: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        Self::scan(&self.inverse_index, b, role)
    }

    fn scan<'a>(
        set: &'a BTreeSet<(String, String, String)>,
        first: &'a str,
        role: &'a str,
    ) -> impl Iterator<Item = &'a str> + 'a {
        let start = (first.to_string(), role.to_string(), String::new());
        set.range(start..)
            .take_while(move |(x, r, _)| x == first && r == role)
            .map(|(_, _, y)| y.as_str())
    }

    /// Members of a concept, in lexicographic order.
    pub fn members<'a>(&'a self, concept: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.concept_assertions
            .iter()
            .filter(move |(_, c)| c == concept)
            .map(|(a, _)| a.as_str())
    }

    /// Whether `pred` is a known predicate: declared in the signature when one
    /// is attached, otherwise used by some assertion.
    pub fn is_declared(&self, pred: &str) -> bool {
        match &self.signature {
            Some(sig) => sig.contains(pred),
            None => {
                self.concept_assertions.iter().any(|(_, c)| c == pred)
                    || self.role_assertions.iter().any(|(_, r, _)| r == pred)
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    /// Rebuilds the inverse index, needed after deserialization.
    pub fn reindexed(mut self) -> Self {
        self.inverse_index = self
            .role_assertions
            .iter()
            .map(|(a, r, b)| (b.clone(), r.clone(), a.clone()))
            .collect();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RawFact {
    pub pred: String,
    pub args: Vec<String>,
}

/// Parses `Pred(a)` / `Pred(a, b)`.
pub(crate) fn parse_fact_atom(s: &str) -> Result<RawFact, String> {
    let s = s.trim();
    let open = s.find('(').ok_or("expected '(' after predicate")?;
    let close = s.rfind(')').ok_or("expected ')'")?;
    if close != s.len() - 1 || close < open {
        return Err("malformed atom".into());
    }
    let pred = s[..open].trim();
    if !is_identifier(pred) {
        return Err(format!("bad predicate name '{pred}'"));
    }
    let args: Vec<String> = s[open + 1..close]
        .split(',')
        .map(|a| a.trim().to_string())
        .collect();
    if args.iter().any(|a| !is_identifier(a)) {
        return Err("arguments must be constant names".into());
    }
    if args.is_empty() || args.len() > 2 {
        return Err("facts take one or two arguments".into());
    }
    Ok(RawFact {
        pred: pred.to_string(),
        args,
    })
}

fn parse_lines(source: &str) -> Result<Vec<(usize, RawFact)>, DlError> {
    let mut out = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let rest = line.strip_prefix("fact").filter(|r| r.starts_with(char::is_whitespace)).ok_or(
            DlError::Syntax {
                line: line_no,
                message: "expected 'fact <Pred>(<args>)'".into(),
            },
        )?;
        let fact = parse_fact_atom(rest).map_err(|message| DlError::Syntax {
            line: line_no,
            message,
        })?;
        out.push((line_no, fact));
    }
    Ok(out)
}

/// Loads a facts file, checking every predicate against the terminology.
pub fn load_facts(source: &str, t: &Terminology) -> Result<FactBase, DlError> {
    let signature = t.concept_names().chain(t.roles.keys()).cloned();
    let mut kb = FactBase::with_signature(signature);
    for (line, fact) in parse_lines(source)? {
        let arity = if t.is_concept(&fact.pred) {
            1
        } else if t.is_role(&fact.pred) {
            2
        } else {
            return Err(DlError::UndefinedName(fact.pred));
        };
        if fact.args.len() != arity {
            return Err(DlError::Syntax {
                line,
                message: format!("'{}' takes {arity} argument(s)", fact.pred),
            });
        }
        insert(&mut kb, &fact);
    }
    Ok(kb)
}

/// Loads a facts file without a terminology; the predicates used become the
/// signature.
pub fn parse_facts(source: &str) -> Result<FactBase, DlError> {
    let mut kb = FactBase::new();
    for (_, fact) in parse_lines(source)? {
        insert(&mut kb, &fact);
    }
    Ok(kb)
}

fn insert(kb: &mut FactBase, fact: &RawFact) {
    match fact.args.as_slice() {
        [a] => kb.assert_concept(a, &fact.pred),
        [a, b] => kb.assert_role(a, &fact.pred, b),
        _ => unreachable!("arity checked by the parser"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixture_counts() {
        let domain = fixtures::train_terminology();
        let kb = load_facts(fixtures::TIMETABLE_FACTS, &domain).unwrap();
        assert_eq!(kb.members("Train").count(), 2);
        assert_eq!(kb.members("Station").count(), 3);
    }

    #[test]
    fn empty_file() {
        let kb = load_facts("", &Terminology::default()).unwrap();
        assert!(kb.is_empty());
        assert!(kb.role_assertions().is_empty());
    }

    #[test]
    fn undeclared_role() {
        let t = fixtures::train_terminology();
        assert_eq!(
            load_facts("fact Serves(ic101, Milan)\n", &t),
            Err(DlError::UndefinedName("Serves".into()))
        );
    }

    #[test]
    fn arity_and_syntax() {
        let t = fixtures::train_terminology();
        assert!(matches!(
            load_facts("fact Train(ic101, Milan)\n", &t),
            Err(DlError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            load_facts("\nTrain(ic101)\n", &t),
            Err(DlError::Syntax { line: 2, .. })
        ));
        assert!(matches!(parse_facts("fact Train(ic 101)"), Err(DlError::Syntax { .. })));
    }

    #[test]
    fn successor_scans_are_exact() {
        let mut kb = FactBase::new();
        kb.assert_role("a", "R", "b");
        kb.assert_role("a", "R", "c");
        kb.assert_role("a", "RR", "d");
        kb.assert_role("ab", "R", "e");
        assert_eq!(kb.successors("a", "R").collect::<Vec<_>>(), ["b", "c"]);
        assert_eq!(kb.predecessors("c", "R").collect::<Vec<_>>(), ["a"]);
    }
}
