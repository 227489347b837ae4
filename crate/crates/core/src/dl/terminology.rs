use std::collections::{BTreeMap, BTreeSet};

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};

use super::concept::{ConceptExpr, RoleExpr};
use super::model;
use super::syntax::{self, Tok};
use super::DlError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleDecl {
    pub domain: ConceptExpr,
    pub range: ConceptExpr,
}

/// A definitional TBox together with the lexical side tables of the domain
/// file (synonyms and question templates).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Terminology {
    pub primitive_concepts: IndexSet<String>,
    pub roles: IndexMap<String, RoleDecl>,
    pub definitions: IndexMap<String, ConceptExpr>,
    /// surface symbol → concept or role name
    pub synonyms: IndexMap<String, String>,
    /// role name → question template
    pub question_templates: IndexMap<String, String>,
    pub user_concept: Option<String>,
}

impl Terminology {
    pub fn is_concept(&self, name: &str) -> bool {
        self.primitive_concepts.contains(name)
            || self.definitions.contains_key(name)
            || self.user_concept.as_deref() == Some(name)
    }

    pub fn is_role(&self, name: &str) -> bool {
        self.roles.contains_key(name)
    }

    pub fn is_defined(&self, name: &str) -> bool {
        self.definitions.contains_key(name)
    }

    /// Concepts that are not defined: declared primitives plus the User concept.
    pub fn base_concepts(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.primitive_concepts.iter().cloned().collect();
        out.extend(self.user_concept.iter().cloned());
        out
    }

    pub fn concept_names(&self) -> impl Iterator<Item = &String> {
        self.primitive_concepts
            .iter()
            .chain(self.user_concept.iter().filter(|u| !self.primitive_concepts.contains(*u)))
            .chain(self.definitions.keys())
    }

    /// Declared range of a role expression, following inverses to the domain.
    pub fn role_range(&self, role: &RoleExpr) -> Option<&ConceptExpr> {
        match role {
            RoleExpr::Atomic(n) => self.roles.get(n).map(|d| &d.range),
            RoleExpr::Inverse(inner) => self.role_domain(inner),
            RoleExpr::Union(_) => None,
        }
    }

    pub fn role_domain(&self, role: &RoleExpr) -> Option<&ConceptExpr> {
        match role {
            RoleExpr::Atomic(n) => self.roles.get(n).map(|d| &d.domain),
            RoleExpr::Inverse(inner) => self.role_range(inner),
            RoleExpr::Union(_) => None,
        }
    }

    pub fn check_concept(&self, c: &ConceptExpr) -> Result<(), DlError> {
        let mut concepts = BTreeSet::new();
        c.concept_names(&mut concepts);
        if let Some(missing) = concepts.into_iter().find(|n| !self.is_concept(n)) {
            return Err(DlError::UndefinedName(missing));
        }
        let mut roles = BTreeSet::new();
        c.role_names(&mut roles);
        if let Some(missing) = roles.into_iter().find(|n| !self.is_role(n)) {
            return Err(DlError::UndefinedName(missing));
        }
        Ok(())
    }

    pub fn check_role(&self, r: &RoleExpr) -> Result<(), DlError> {
        let mut roles = BTreeSet::new();
        r.role_names(&mut roles);
        match roles.into_iter().find(|n| !self.is_role(n)) {
            Some(missing) => Err(DlError::UndefinedName(missing)),
            None => Ok(()),
        }
    }

    /// Replaces every defined name by its body, recursively, and flattens
    /// the resulting conjunctions and disjunctions.
    pub fn unfold(&self, c: &ConceptExpr) -> Result<ConceptExpr, DlError> {
        self.check_concept(c)?;
        Ok(self.unfold_unchecked(c))
    }

    fn unfold_unchecked(&self, c: &ConceptExpr) -> ConceptExpr {
        match c {
            ConceptExpr::Top => ConceptExpr::Top,
            ConceptExpr::Atomic(n) => match self.definitions.get(n) {
                Some(body) => self.unfold_unchecked(body),
                None => c.clone(),
            },
            ConceptExpr::Conjunction(ps) => {
                ConceptExpr::and(ps.iter().map(|p| self.unfold_unchecked(p)).collect())
            }
            ConceptExpr::Disjunction(ps) => {
                ConceptExpr::or(ps.iter().map(|p| self.unfold_unchecked(p)).collect())
            }
            ConceptExpr::Exists(r, f) => ConceptExpr::exists(r.clone(), self.unfold_unchecked(f)),
            ConceptExpr::Forall(r, f) => ConceptExpr::forall(r.clone(), self.unfold_unchecked(f)),
        }
    }

    /// The roles whose declared domain or range unfolds to a conjunction
    /// containing the User concept.
    pub fn user_rel(&self) -> BTreeSet<String> {
        let Some(user) = self.user_concept.as_deref() else {
            return BTreeSet::new();
        };
        let mentions_user = |c: &ConceptExpr| {
            self.unfold_unchecked(c)
                .conjuncts()
                .iter()
                .any(|k| matches!(k, ConceptExpr::Atomic(n) if n == user))
        };
        self.roles
            .iter()
            .filter(|(_, d)| mentions_user(&d.domain) || mentions_user(&d.range))
            .map(|(n, _)| n.clone())
            .collect()
    }

    /// Full validation: names resolved, definitions acyclic, every body
    /// satisfiable in a small model.
    pub fn validate(&self) -> Result<(), DlError> {
        for decl in self.roles.values() {
            self.check_concept(&decl.domain)?;
            self.check_concept(&decl.range)?;
        }
        for body in self.definitions.values() {
            self.check_concept(body)?;
        }
        for (surface, target) in &self.synonyms {
            if !self.is_concept(target) && !self.is_role(target) {
                return Err(DlError::UndefinedName(target.clone()));
            }
            if surface.is_empty() {
                return Err(DlError::UndefinedName(surface.clone()));
            }
        }
        for role in self.question_templates.keys() {
            if !self.is_role(role) {
                return Err(DlError::UndefinedName(role.clone()));
            }
        }
        if let Some(cycle) = self.find_cycle() {
            return Err(DlError::CyclicTerminology(cycle));
        }
        for (name, body) in &self.definitions {
            let unfolded = self.unfold_unchecked(body);
            if model::find_model(&unfolded, self, model::MAX_UNIVERSE).is_none() {
                return Err(DlError::UnsatisfiableDefinition(name.clone()));
            }
        }
        Ok(())
    }

    fn find_cycle(&self) -> Option<Vec<String>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        fn visit(
            t: &Terminology,
            name: &str,
            marks: &mut BTreeMap<String, Mark>,
            stack: &mut Vec<String>,
        ) -> Option<Vec<String>> {
            match marks.get(name) {
                Some(Mark::Done) => return None,
                Some(Mark::Active) => {
                    let start = stack.iter().position(|s| s == name).unwrap_or(0);
                    return Some(stack[start..].to_vec());
                }
                None => {}
            }
            let body = t.definitions.get(name)?;
            marks.insert(name.to_string(), Mark::Active);
            stack.push(name.to_string());
            let mut deps = BTreeSet::new();
            body.concept_names(&mut deps);
            // visit in a stable order so the reported path is deterministic
            for dep in deps {
                if let Some(c) = visit(t, &dep, marks, stack) {
                    return Some(c);
                }
            }
            stack.pop();
            marks.insert(name.to_string(), Mark::Done);
            None
        }
        let mut marks = BTreeMap::new();
        for name in self.definitions.keys() {
            let mut stack = Vec::new();
            if let Some(c) = visit(self, name, &mut marks, &mut stack) {
                return Some(c);
            }
        }
        None
    }
}

/// Strips a trailing `#` comment, ignoring `#` inside double quotes.
pub(crate) fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

fn syntax(line: usize, message: impl Into<String>) -> DlError {
    DlError::Syntax {
        line,
        message: message.into(),
    }
}

fn expect_name(s: &str, line: usize) -> Result<String, DlError> {
    let s = s.trim();
    if syntax::is_identifier(s) {
        Ok(s.to_string())
    } else {
        Err(syntax(line, format!("expected a name, found '{s}'")))
    }
}

/// Parses the terminology part of a domain file and validates it.
///
/// Lexicon lines (`lex ...`) are skipped here; the semantic parser reads them.
pub fn load_terminology(source: &str) -> Result<Terminology, DlError> {
    let t = parse_terminology(source)?;
    t.validate()?;
    Ok(t)
}

pub(crate) fn parse_terminology(source: &str) -> Result<Terminology, DlError> {
    let mut t = Terminology::default();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut declare = |name: &str, line: usize| -> Result<(), DlError> {
        if let Some(prev) = seen.insert(name.to_string(), line) {
            return Err(syntax(line, format!("'{name}' already declared on line {prev}")));
        }
        Ok(())
    };

    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match kw {
            "concept" => {
                let name = expect_name(rest, line_no)?;
                declare(&name, line_no)?;
                t.primitive_concepts.insert(name);
            }
            "user-concept" => {
                let name = expect_name(rest, line_no)?;
                if t.user_concept.is_some() {
                    return Err(syntax(line_no, "more than one user-concept"));
                }
                if !t.primitive_concepts.contains(&name) {
                    declare(&name, line_no)?;
                }
                t.user_concept = Some(name);
            }
            "role" => {
                let (name, sig) = rest
                    .split_once(':')
                    .ok_or_else(|| syntax(line_no, "expected 'role <Name> : <Domain> x <Range>'"))?;
                let name = expect_name(name, line_no)?;
                let toks = syntax::tokenize(sig).map_err(|m| syntax(line_no, m))?;
                let split = top_level_x(&toks)
                    .ok_or_else(|| syntax(line_no, "role signature needs '<Domain> x <Range>'"))?;
                let domain = syntax::parse_concept_tokens(&toks[..split])
                    .map_err(|m| syntax(line_no, m))?;
                let range = syntax::parse_concept_tokens(&toks[split + 1..])
                    .map_err(|m| syntax(line_no, m))?;
                declare(&name, line_no)?;
                t.roles.insert(name, RoleDecl { domain, range });
            }
            "define" => {
                let (name, body) = rest
                    .split_once('=')
                    .ok_or_else(|| syntax(line_no, "expected 'define <Name> = <expression>'"))?;
                let name = expect_name(name, line_no)?;
                let body = syntax::parse_concept(body).map_err(|m| syntax(line_no, m))?;
                declare(&name, line_no)?;
                t.definitions.insert(name, body);
            }
            "synonym" => {
                let (surface, target) = rest
                    .split_once("=>")
                    .ok_or_else(|| syntax(line_no, "expected 'synonym <surface> => <Name>'"))?;
                let surface = surface.trim().to_lowercase();
                if surface.is_empty() || surface.contains(char::is_whitespace) {
                    return Err(syntax(line_no, "synonym surface must be a single word"));
                }
                let target = expect_name(target, line_no)?;
                if t.synonyms.insert(surface.clone(), target).is_some() {
                    return Err(syntax(line_no, format!("duplicate synonym '{surface}'")));
                }
            }
            "question" => {
                let (role, template) = rest
                    .split_once('=')
                    .ok_or_else(|| syntax(line_no, "expected 'question <Role> = \"...\"'"))?;
                let role = expect_name(role, line_no)?;
                let template = template.trim();
                let inner = template
                    .strip_prefix('"')
                    .and_then(|s| s.strip_suffix('"'))
                    .filter(|s| !s.is_empty())
                    .ok_or_else(|| syntax(line_no, "question template must be a non-empty quoted string"))?;
                t.question_templates.insert(role, inner.to_string());
            }
            "lex" => {}
            other => return Err(syntax(line_no, format!("unknown directive '{other}'"))),
        }
    }
    Ok(t)
}

fn top_level_x(toks: &[Tok]) -> Option<usize> {
    let mut depth = 0i32;
    for (i, t) in toks.iter().enumerate() {
        match t {
            Tok::LParen => depth += 1,
            Tok::RParen => depth -= 1,
            Tok::Ident(s) if s == "x" && depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}
