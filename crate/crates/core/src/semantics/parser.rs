use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::lexicon::{LexEntry, Lexicon};
use super::{ParseError, SpeechAct};
use crate::dl::{instance_check, ConceptExpr, FactBase, Terminology};
use crate::drs::{Drs, LambdaDrs, Referent};
use crate::fil::{fresh_name, Atom, Term};

const STOP_WORDS: &[&str] = &["does", "do", "a", "an", "the", "is", "are", "there", "please"];
const AUXILIARIES: &[&str] = &["does", "do", "is", "are"];
const AFFIRMATIVE: &[&str] = &["yes", "ok", "okay", "sure"];
const NEGATIVE: &[&str] = &["no", "nope"];

/// Surface features that drive speech-act classification.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtteranceFeatures {
    pub has_wh: bool,
    pub question_mark: bool,
    /// Starts with a question word or an auxiliary.
    pub interrogative_order: bool,
    /// `Some(true)` for a bare affirmative, `Some(false)` for a bare negative.
    pub response: Option<bool>,
}

/// Dialog context the classifier looks at.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActContext {
    pub after_suggest: bool,
    pub open_goal_roles: BTreeSet<String>,
    pub user_rel: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedUtterance {
    pub drs: LambdaDrs,
    pub act: SpeechAct,
    pub features: UtteranceFeatures,
}

/// Returns the synonym target of `token`, or the token itself.
pub fn normalize_token(token: &str, t: &Terminology) -> String {
    t.synonyms
        .get(&token.to_lowercase())
        .cloned()
        .unwrap_or_else(|| token.to_string())
}

/// Lower-cases and splits on whitespace, dropping trailing punctuation.
fn tokenize(text: &str) -> (Vec<String>, bool) {
    let mut question_mark = false;
    let mut tokens = Vec::new();
    for raw in text.split_whitespace() {
        let word = raw.trim_end_matches(['?', '.', '!', ',']);
        if raw[word.len()..].contains('?') {
            question_mark = true;
        }
        let word = word.trim_start_matches(['"', '\'', '(']);
        if !word.is_empty() {
            tokens.push(word.to_lowercase());
        }
    }
    (tokens, question_mark)
}

/// Applies the speech-act cascade: confirmations after a suggestion, then
/// questions, then answers, with query as the fallback.
pub fn classify_speech_act(features: &UtteranceFeatures, drs: &LambdaDrs, ctx: &ActContext) -> SpeechAct {
    if ctx.after_suggest {
        match features.response {
            Some(true) => return SpeechAct::Accept,
            Some(false) => return SpeechAct::Reject,
            None => {}
        }
    }
    if features.has_wh || (features.question_mark && features.interrogative_order) {
        return SpeechAct::Query;
    }
    let role_of = |a: &Atom| -> bool { a.args.len() == 2 && ctx.user_rel.contains(&a.pred) };
    let asserts_user_fact = drs.body.conditions.iter().any(role_of);
    let binds_goal = !ctx.open_goal_roles.is_empty()
        && (drs
            .body
            .conditions
            .iter()
            .any(|a| ctx.open_goal_roles.contains(&a.pred))
            || is_bare_name(drs));
    if asserts_user_fact || binds_goal {
        SpeechAct::Inform
    } else {
        SpeechAct::Query
    }
}

/// A DRS consisting of named individuals only, as in the answer "Milan."
pub fn is_bare_name(drs: &LambdaDrs) -> bool {
    drs.params.is_empty()
        && drs.body.conditions.is_empty()
        && !drs.body.referents.is_empty()
        && drs.body.referents.iter().all(|r| !r.term.is_var())
}

/// A deterministic left-to-right composer: nouns and verbs describe one main
/// referent, a wh-word opens a parameter, prepositions attach named objects
/// after checking them against their restriction.
#[derive(Debug, Clone)]
pub struct SemanticParser<'a> {
    lex: &'a Lexicon,
    t: &'a Terminology,
    facts: FactBase,
    user: String,
}

enum Pending {
    Prep { surface: String, role: String, restriction: ConceptExpr },
    Answer { surface: String, role: String },
}

struct Attachment {
    role: String,
    object: String,
    from_user: bool,
}

impl<'a> SemanticParser<'a> {
    /// `kb` is extended with the lexicon's own facts for the attachment
    /// checks. `user` names the implicit subject of answer fragments.
    pub fn new(lex: &'a Lexicon, t: &'a Terminology, kb: &FactBase, user: &str) -> Self {
        SemanticParser {
            lex,
            t,
            facts: kb.union(&lex.facts()),
            user: user.to_string(),
        }
    }

    pub fn facts(&self) -> &FactBase {
        &self.facts
    }

    fn resolve(&self, token: &str) -> Option<LexEntry> {
        if let Some(e) = self.lex.get(token) {
            return Some(e.clone());
        }
        let n = normalize_token(token, self.t);
        if n == token {
            return None;
        }
        if self.t.is_concept(&n) {
            Some(
                self.lex
                    .concept_entry(&n)
                    .cloned()
                    .unwrap_or(LexEntry::VerbConcept(n)),
            )
        } else {
            self.lex.role_entry(&n).cloned()
        }
    }

    /// Builds the λ-DRS of `text` and its surface features, without
    /// classifying the speech act.
    pub fn compose(&self, text: &str) -> Result<(LambdaDrs, UtteranceFeatures), ParseError> {
        let (tokens, question_mark) = tokenize(text);
        if tokens.is_empty() {
            return Err(ParseError::EmptyUtterance);
        }
        let mut features = UtteranceFeatures {
            question_mark,
            ..Default::default()
        };
        if tokens.len() == 1 {
            if AFFIRMATIVE.contains(&tokens[0].as_str()) {
                features.response = Some(true);
                return Ok((LambdaDrs::default(), features));
            }
            if NEGATIVE.contains(&tokens[0].as_str()) {
                features.response = Some(false);
                return Ok((LambdaDrs::default(), features));
            }
        }

        let mut main_concepts: Vec<String> = Vec::new();
        let mut wh: Option<(String, Option<String>)> = None;
        let mut pending: Option<Pending> = None;
        let mut attachments: Vec<Attachment> = Vec::new();
        let mut names: Vec<(String, String)> = Vec::new();

        for (idx, tok) in tokens.iter().enumerate() {
            let entry = match self.resolve(tok) {
                Some(e) => e,
                None if STOP_WORDS.contains(&tok.as_str()) => {
                    if idx == 0 && AUXILIARIES.contains(&tok.as_str()) {
                        features.interrogative_order = true;
                    }
                    continue;
                }
                None => return Err(ParseError::UnknownLexeme(tok.clone())),
            };
            if let Some(p) = &pending {
                let LexEntry::ProperName { constant, concept } = &entry else {
                    let surface = match p {
                        Pending::Prep { surface, .. } | Pending::Answer { surface, .. } => surface,
                    };
                    return Err(ParseError::DanglingPreposition(surface.clone()));
                };
                match pending.take() {
                    Some(Pending::Prep { role, restriction, .. }) => {
                        if !instance_check(constant, &restriction, self.t, &self.facts)?.is_proved() {
                            return Err(ParseError::AttachmentRejected {
                                role,
                                object: constant.clone(),
                                restriction: restriction.to_string(),
                            });
                        }
                        names.push((constant.clone(), concept.clone()));
                        attachments.push(Attachment {
                            role,
                            object: constant.clone(),
                            from_user: false,
                        });
                    }
                    Some(Pending::Answer { role, .. }) => attachments.push(Attachment {
                        role,
                        object: constant.clone(),
                        from_user: true,
                    }),
                    None => unreachable!(),
                }
                continue;
            }
            match entry {
                LexEntry::NounConcept(c) | LexEntry::VerbConcept(c) => {
                    if !main_concepts.contains(&c) {
                        main_concepts.push(c);
                    }
                }
                LexEntry::WhWord { sort, role } => {
                    features.has_wh = true;
                    if idx == 0 {
                        features.interrogative_order = true;
                    }
                    wh = Some((sort, role));
                }
                LexEntry::PrepRole { role, restriction } => {
                    pending = Some(Pending::Prep {
                        surface: tok.clone(),
                        role,
                        restriction,
                    })
                }
                LexEntry::AnswerPrep(role) => {
                    pending = Some(Pending::Answer {
                        surface: tok.clone(),
                        role,
                    })
                }
                LexEntry::ProperName { constant, concept } => names.push((constant, concept)),
            }
        }
        if let Some(Pending::Prep { surface, .. } | Pending::Answer { surface, .. }) = pending {
            return Err(ParseError::DanglingPreposition(surface));
        }

        Ok((self.assemble(main_concepts, wh, &attachments, &names), features))
    }

    fn assemble(
        &self,
        mut main_concepts: Vec<String>,
        wh: Option<(String, Option<String>)>,
        attachments: &[Attachment],
        names: &[(String, String)],
    ) -> LambdaDrs {
        // without a noun or verb, the subject of the first linking role
        // stands in for the main referent
        if main_concepts.is_empty() {
            let linking = wh
                .as_ref()
                .and_then(|(_, r)| r.clone())
                .or_else(|| attachments.iter().find(|a| !a.from_user).map(|a| a.role.clone()));
            if let Some(dom) = linking
                .and_then(|r| self.t.roles.get(&r))
                .and_then(|d| d.domain.head_atom())
            {
                main_concepts.push(dom.to_string());
            }
        }

        let wh_var = "x".to_string();
        let main_var = main_concepts.first().map(|c| {
            let base: String = c.chars().next().unwrap().to_lowercase().collect();
            fresh_name(&base, &BTreeSet::from([wh_var.clone()]))
        });

        let mut body = Drs::new();
        if let (Some(v), Some(c)) = (&main_var, main_concepts.first()) {
            body.add_referent(Referent::var(v.clone(), Some(c)));
        }
        for (constant, concept) in names {
            body.add_referent(Referent::constant(constant.clone(), Some(concept)));
        }
        if let Some(v) = &main_var {
            for c in &main_concepts {
                body.add_condition(Atom::unary(c.clone(), Term::var(v.clone())));
            }
        }
        if let Some((sort, _)) = &wh {
            body.add_condition(Atom::unary(sort.clone(), Term::var(wh_var.clone())));
        }
        for a in attachments.iter().filter(|a| !a.from_user) {
            if let Some(range) = self.t.roles.get(&a.role).and_then(|d| d.range.head_atom()) {
                body.add_condition(Atom::unary(range, Term::constant(a.object.clone())));
            }
        }
        if let (Some(v), Some((_, Some(role)))) = (&main_var, &wh) {
            body.add_condition(Atom::binary(role.clone(), Term::var(v.clone()), Term::var(wh_var.clone())));
        }
        for a in attachments {
            let subject = if a.from_user {
                Some(Term::constant(self.user.clone()))
            } else {
                main_var.clone().map(Term::Var)
            };
            if let Some(s) = subject {
                body.add_condition(Atom::binary(a.role.clone(), s, Term::constant(a.object.clone())));
            }
        }

        LambdaDrs {
            params: wh.map(|(sort, _)| vec![(wh_var, Some(sort))]).unwrap_or_default(),
            body,
        }
    }

    /// Composes and classifies `text` in the given context.
    pub fn parse(&self, text: &str, ctx: &ActContext) -> Result<ParsedUtterance, ParseError> {
        let (drs, features) = self.compose(text)?;
        let act = classify_speech_act(&features, &drs, ctx);
        Ok(ParsedUtterance { drs, act, features })
    }
}

/// Parses `text` outside any dialog, with `u` as the session user.
pub fn parse_utterance(
    text: &str,
    lex: &Lexicon,
    t: &Terminology,
    kb: &FactBase,
) -> Result<(LambdaDrs, SpeechAct), ParseError> {
    let parser = SemanticParser::new(lex, t, kb, "u");
    let ctx = ActContext {
        user_rel: t.user_rel(),
        ..Default::default()
    };
    let p = parser.parse(text, &ctx)?;
    Ok((p.drs, p.act))
}
