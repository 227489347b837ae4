use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::dl::{is_identifier, parse_concept, strip_comment, ConceptExpr, DlError, FactBase, Terminology};

/// What a surface form contributes to the DRS under construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LexEntry {
    /// A common noun: asserts the concept of the main referent.
    NounConcept(String),
    /// A verb: asserts the concept of the main referent (the event and the
    /// train are not told apart).
    VerbConcept(String),
    /// A preposition linking the main referent to a named object, which must
    /// be a provable instance of the restriction.
    PrepRole { role: String, restriction: ConceptExpr },
    ProperName { constant: String, concept: String },
    /// A question word opening a parameter of the given sort, linked to the
    /// main referent through `role`.
    WhWord { sort: String, role: Option<String> },
    /// A preposition in an answer fragment: relates the session user to the
    /// object.
    AnswerPrep(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Lexicon {
    entries: IndexMap<String, LexEntry>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry; surface forms are stored lower-cased.
    pub fn insert(&mut self, surface: &str, entry: LexEntry) {
        self.entries.insert(surface.to_lowercase(), entry);
    }

    pub fn get(&self, surface: &str) -> Option<&LexEntry> {
        self.entries.get(surface)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &LexEntry)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The first entry asserting `concept`.
    pub fn concept_entry(&self, concept: &str) -> Option<&LexEntry> {
        self.entries.values().find(|e| {
            matches!(e, LexEntry::NounConcept(c) | LexEntry::VerbConcept(c) if c == concept)
        })
    }

    /// The first preposition for `role`.
    pub fn role_entry(&self, role: &str) -> Option<&LexEntry> {
        self.entries.values().find(|e| match e {
            LexEntry::PrepRole { role: r, .. } => r == role,
            LexEntry::AnswerPrep(r) => r == role,
            _ => false,
        })
    }

    /// The first surface form naming `constant`.
    pub fn surface_of(&self, constant: &str) -> Option<&str> {
        self.entries.iter().find_map(|(s, e)| match e {
            LexEntry::ProperName { constant: c, .. } if c == constant => Some(s.as_str()),
            _ => None,
        })
    }

    /// The display form of a constant: its first surface form with the
    /// constant's own capitalization when they differ only in case.
    pub fn display_name(&self, constant: &str) -> String {
        match self.surface_of(constant) {
            Some(s) if s.eq_ignore_ascii_case(constant) => constant.to_string(),
            Some(s) => s.to_string(),
            None => constant.to_string(),
        }
    }

    /// One concept assertion per proper name.
    pub fn facts(&self) -> FactBase {
        let mut kb = FactBase::new();
        for e in self.entries.values() {
            if let LexEntry::ProperName { constant, concept } = e {
                kb.assert_concept(constant, concept);
            }
        }
        kb
    }
}

fn syntax(line: usize, message: impl Into<String>) -> DlError {
    DlError::Syntax {
        line,
        message: message.into(),
    }
}

fn check_concept(t: &Terminology, name: &str) -> Result<(), DlError> {
    if t.is_concept(name) {
        Ok(())
    } else {
        Err(DlError::UndefinedName(name.to_string()))
    }
}

fn check_role(t: &Terminology, name: &str) -> Result<(), DlError> {
    if t.is_role(name) {
        Ok(())
    } else {
        Err(DlError::UndefinedName(name.to_string()))
    }
}

/// The first declared role whose range is exactly `sort`.
fn role_with_range(t: &Terminology, sort: &str) -> Option<String> {
    t.roles
        .iter()
        .find(|(_, d)| d.range.head_atom() == Some(sort) && d.range.conjuncts().len() == 1)
        .map(|(n, _)| n.clone())
}

fn parse_entry(kind: &str, rhs: &str, line: usize, t: &Terminology) -> Result<LexEntry, DlError> {
    let words: Vec<&str> = rhs.split_whitespace().collect();
    match (kind, words.as_slice()) {
        ("noun", ["concept", c]) | ("verb", ["concept", c]) => {
            check_concept(t, c)?;
            Ok(if kind == "noun" {
                LexEntry::NounConcept(c.to_string())
            } else {
                LexEntry::VerbConcept(c.to_string())
            })
        }
        ("wh", ["sort", s, rest @ ..]) => {
            check_concept(t, s)?;
            let role = match rest {
                [] => role_with_range(t, s),
                ["role", r] => {
                    check_role(t, r)?;
                    Some(r.to_string())
                }
                _ => return Err(syntax(line, "expected `sort <Concept> [role <Role>]`")),
            };
            Ok(LexEntry::WhWord {
                sort: s.to_string(),
                role,
            })
        }
        ("prep", ["role", r, rest @ ..]) => {
            check_role(t, r)?;
            let restriction = match rest {
                [] => t
                    .roles
                    .get(*r)
                    .map(|d| d.range.clone())
                    .unwrap_or(ConceptExpr::Top),
                ["restrict", ..] => {
                    let expr = rhs
                        .split_once("restrict")
                        .map(|(_, e)| e.trim())
                        .unwrap_or_default();
                    let c = parse_concept(expr).map_err(|m| syntax(line, m))?;
                    t.check_concept(&c)?;
                    c
                }
                _ => return Err(syntax(line, "expected `role <Role> [restrict <concept>]`")),
            };
            Ok(LexEntry::PrepRole {
                role: r.to_string(),
                restriction,
            })
        }
        ("answerprep", ["role", r]) => {
            check_role(t, r)?;
            Ok(LexEntry::AnswerPrep(r.to_string()))
        }
        ("name", [constant, ":", c]) => {
            if !is_identifier(constant) {
                return Err(syntax(line, format!("bad constant `{constant}`")));
            }
            check_concept(t, c)?;
            Ok(LexEntry::ProperName {
                constant: constant.to_string(),
                concept: c.to_string(),
            })
        }
        ("noun" | "verb" | "wh" | "prep" | "answerprep" | "name", _) => {
            Err(syntax(line, format!("malformed `lex {kind}` entry")))
        }
        _ => Err(syntax(line, format!("unknown lexical category `{kind}`"))),
    }
}

/// Reads the `lex` lines of a domain file; all other lines are ignored.
///
/// ```text
/// lex wh when => sort Time role At
/// lex noun train => concept Train
/// lex prep to => role To restrict exists HasArrStation.Station
/// lex answerprep from => role DepartFrom
/// lex name rome => Rome : CityName
/// ```
pub fn load_lexicon(source: &str, t: &Terminology) -> Result<Lexicon, DlError> {
    let mut lex = Lexicon::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let text = strip_comment(raw).trim();
        let Some(rest) = text.strip_prefix("lex ") else {
            continue;
        };
        let (lhs, rhs) = rest
            .split_once("=>")
            .ok_or_else(|| syntax(line, "expected `lex <category> <surface> => ...`"))?;
        let mut head = lhs.split_whitespace();
        let (Some(kind), Some(surface), None) = (head.next(), head.next(), head.next()) else {
            return Err(syntax(line, "expected `lex <category> <surface> => ...`"));
        };
        let surface = surface.to_lowercase();
        if lex.get(&surface).is_some() {
            return Err(syntax(line, format!("duplicate surface form `{surface}`")));
        }
        let entry = parse_entry(kind, rhs.trim(), line, t)?;
        lex.insert(&surface, entry);
    }
    Ok(lex)
}
