use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::goals::{generate_question, walk, Goal, GoalStatus, Walk};
use crate::dl::{instance_check, load_facts, load_terminology, ConceptExpr, DlError, FactBase, Terminology};
use crate::drs::LambdaDrs;
use crate::fil::{fresh_name, Atom, Bindings, Literal, PartialInterpretation, Term, TruthValue};
use crate::semantics::{is_bare_name, load_lexicon, ActContext, Lexicon, ParseError, SemanticParser, SpeechAct};
use crate::solver::{ConjunctiveQuery, ProblemSolver, SolverBinding, TimetableSolver};
use crate::tau::Translator;

const SKOLEM_PREFIX: &str = "_:";

/// What the system does in reply to a user turn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum SystemAction {
    AskQuestion {
        goal: Goal,
        text: String,
        expected_sort: Option<String>,
    },
    Suggest {
        binding: Literal,
        text: String,
    },
    Inform {
        results: Vec<SolverBinding>,
        text: String,
    },
    Clarify {
        reason: String,
        text: String,
    },
}

impl SystemAction {
    pub fn text(&self) -> &str {
        match self {
            SystemAction::AskQuestion { text, .. }
            | SystemAction::Suggest { text, .. }
            | SystemAction::Inform { text, .. }
            | SystemAction::Clarify { text, .. } => text,
        }
    }

    /// The speech act the system performs; questions and clarification
    /// requests are queries.
    pub fn act(&self) -> SpeechAct {
        match self {
            SystemAction::AskQuestion { .. } | SystemAction::Clarify { .. } => SpeechAct::Query,
            SystemAction::Suggest { .. } => SpeechAct::Suggest,
            SystemAction::Inform { .. } => SpeechAct::Inform,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SystemAction::AskQuestion { .. } => "ask",
            SystemAction::Suggest { .. } => "suggest",
            SystemAction::Inform { .. } => "inform",
            SystemAction::Clarify { .. } => "clarify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Speaker {
    User,
    System,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub turn: usize,
    pub speaker: Speaker,
    pub act: SpeechAct,
    pub text: String,
}

/// The question under discussion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Focus {
    pub query: LambdaDrs,
    pub target: Option<String>,
    /// Skolem constant standing for the main referent.
    pub main: Option<String>,
    pub asked: BTreeSet<String>,
    pub questions_asked: usize,
    /// Ionic subformulas in the translated target.
    pub ionic_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DialogState {
    pub shared: PartialInterpretation,
    pub agenda: Vec<Goal>,
    pub focus: Option<Focus>,
    pub history: Vec<HistoryEntry>,
    pub user_const: String,
    pub turn: usize,
    pub last_drs: Option<LambdaDrs>,
    pub pending_suggestion: Option<Literal>,
}

impl DialogState {
    pub fn open_goals(&self) -> impl Iterator<Item = &Goal> {
        self.agenda.iter().filter(|g| g.status != GoalStatus::Answered)
    }

    /// One `turn \t speaker \t act \t text` line per history entry.
    pub fn transcript(&self) -> String {
        let mut out = String::new();
        for e in &self.history {
            let speaker = match e.speaker {
                Speaker::User => "user",
                Speaker::System => "system",
            };
            let _ = writeln!(out, "{}\t{}\t{}\t{}", e.turn, speaker, e.act, e.text);
        }
        out
    }
}

/// Immutable configuration shared by all sessions: terminology, lexicon,
/// application facts and the problem solver.
#[derive(Clone)]
pub struct DialogEngine {
    t: Terminology,
    lex: Lexicon,
    kb: FactBase,
    solver: Arc<dyn ProblemSolver>,
    user_rel: BTreeSet<String>,
    user_const: String,
}

fn skolem(v: &str) -> String {
    format!("{SKOLEM_PREFIX}{v}")
}

fn facts_of(i: &PartialInterpretation) -> FactBase {
    let mut kb = FactBase::new();
    for c in i.universe() {
        kb.add_individual(c);
    }
    for lit in i.literals().into_iter().filter(|l| l.positive) {
        match lit.args.as_slice() {
            [a] => kb.assert_concept(a, &lit.pred),
            [a, b] => kb.assert_role(a, &lit.pred, b),
            _ => {}
        }
    }
    kb
}

impl DialogEngine {
    pub fn new(t: Terminology, lex: Lexicon, kb: FactBase, solver: Arc<dyn ProblemSolver>) -> Self {
        DialogEngine {
            user_rel: t.user_rel(),
            t,
            lex,
            kb,
            solver,
            user_const: "u".to_string(),
        }
    }

    /// Loads a domain file (terminology plus lexicon) and a facts file, with
    /// the in-memory timetable solver over the facts.
    pub fn from_sources(domain: &str, facts: &str) -> Result<Self, DlError> {
        let t = load_terminology(domain)?;
        let lex = load_lexicon(domain, &t)?;
        let kb = load_facts(facts, &t)?;
        let solver = Arc::new(TimetableSolver::new(kb.clone()));
        Ok(DialogEngine::new(t, lex, kb, solver))
    }

    /// The bundled train domain over the bundled timetable.
    pub fn train() -> Self {
        DialogEngine::from_sources(crate::fixtures::TRAIN_DOMAIN, crate::fixtures::TIMETABLE_FACTS)
            .expect("bundled domain loads")
    }

    pub fn terminology(&self) -> &Terminology {
        &self.t
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lex
    }

    pub fn facts(&self) -> &FactBase {
        &self.kb
    }

    pub fn user_rel(&self) -> &BTreeSet<String> {
        &self.user_rel
    }

    pub fn parser(&self) -> SemanticParser<'_> {
        SemanticParser::new(&self.lex, &self.t, &self.kb, &self.user_const)
    }

    /// Shared knowledge starts with the application facts, the lexicon's
    /// facts and the session user.
    pub fn new_state(&self) -> DialogState {
        let mut shared = PartialInterpretation::from_facts(&self.kb.union(&self.lex.facts()));
        if let Some(user) = &self.t.user_concept {
            shared
                .assert_literal(&Literal::pos(user.clone(), &[&self.user_const]))
                .expect("fresh interpretation is consistent");
        } else {
            shared.add_constant(self.user_const.clone());
        }
        DialogState {
            shared,
            agenda: Vec::new(),
            focus: None,
            history: Vec::new(),
            user_const: self.user_const.clone(),
            turn: 0,
            last_drs: None,
            pending_suggestion: None,
        }
    }

    /// Processes one user utterance, returning the next state and the
    /// system's reply. `state` is left untouched.
    pub fn interpret_turn(&self, text: &str, state: &DialogState) -> (DialogState, SystemAction) {
        let mut next = state.clone();
        let action = self.turn(&mut next, text);
        (next, action)
    }

    /// In-place variant of [`DialogEngine::interpret_turn`].
    pub fn turn(&self, st: &mut DialogState, text: &str) -> SystemAction {
        st.turn += 1;
        let ctx = ActContext {
            after_suggest: st.pending_suggestion.is_some(),
            open_goal_roles: st.open_goals().map(|g| g.origin_role.clone()).collect(),
            user_rel: self.user_rel.clone(),
        };
        let parsed = self.parser().parse(text, &ctx);
        let user_act = parsed.as_ref().map(|p| p.act).unwrap_or(SpeechAct::Query);
        st.history.push(HistoryEntry {
            turn: st.turn,
            speaker: Speaker::User,
            act: user_act,
            text: text.trim().to_string(),
        });

        let action = match parsed {
            Err(e) => self.clarify_parse(&e),
            Ok(p) => {
                st.last_drs = Some(p.drs.clone());
                let suggestion = if matches!(p.act, SpeechAct::Accept | SpeechAct::Reject) {
                    st.pending_suggestion.take()
                } else {
                    st.pending_suggestion = None;
                    None
                };
                match (p.act, suggestion) {
                    (SpeechAct::Accept, Some(lit)) => self.confirm(st, lit, true),
                    (SpeechAct::Reject, Some(lit)) => self.confirm(st, lit, false),
                    (SpeechAct::Inform | SpeechAct::Suggest, _) => self.bind_answer(st, &p.drs),
                    _ if p.features.response.is_some() => SystemAction::Clarify {
                        reason: "NothingToConfirm".into(),
                        text: "Sorry, there is nothing to confirm.".into(),
                    },
                    _ => self.start_focus(st, p.drs),
                }
            }
        };

        st.history.push(HistoryEntry {
            turn: st.turn,
            speaker: Speaker::System,
            act: action.act(),
            text: action.text().to_string(),
        });
        action
    }

    fn clarify_parse(&self, e: &ParseError) -> SystemAction {
        let (reason, text) = match e {
            ParseError::UnknownLexeme(w) => ("UnknownLexeme", format!("Sorry, I did not understand '{w}'.")),
            ParseError::AttachmentRejected { role, object, restriction } => (
                "AttachmentRejected",
                format!(
                    "Sorry, {} does not fit {role} (expected {restriction}).",
                    self.lex.display_name(object)
                ),
            ),
            ParseError::EmptyUtterance => ("EmptyUtterance", "Sorry, I did not hear anything.".to_string()),
            ParseError::DanglingPreposition(p) => {
                ("DanglingPreposition", format!("Sorry, '{p}' needs an object."))
            }
            ParseError::Dl(d) => ("DomainError", format!("Sorry, {d}.")),
        };
        SystemAction::Clarify {
            reason: reason.into(),
            text,
        }
    }

    fn confirm(&self, st: &mut DialogState, lit: Literal, accepted: bool) -> SystemAction {
        let lit = Literal {
            positive: accepted,
            ..lit
        };
        if let Err(e) = st.shared.assert_literal(&lit) {
            return SystemAction::Clarify {
                reason: "InconsistentExtension".into(),
                text: format!("Sorry, that contradicts what I know ({e})."),
            };
        }
        for g in &mut st.agenda {
            if g.status == GoalStatus::Suggested {
                g.status = if accepted { GoalStatus::Answered } else { GoalStatus::Open };
            }
        }
        self.advance(st)
    }

    /// Variables of the parameters, referents and conditions of `d`, mapped
    /// to skolem constants.
    fn skolems(d: &LambdaDrs) -> BTreeMap<String, String> {
        let mut vars: Vec<String> = d.body.var_referents().map(|(v, _)| v.to_string()).collect();
        vars.extend(d.params.iter().map(|(p, _)| p.clone()));
        vars.extend(d.body.vars());
        vars.into_iter().map(|v| (v.clone(), skolem(&v))).collect()
    }

    fn skolemized(d: &LambdaDrs) -> Vec<Literal> {
        let map: BTreeMap<String, Term> = Self::skolems(d)
            .into_iter()
            .map(|(v, c)| (v, Term::Const(c)))
            .collect();
        d.body
            .conditions
            .iter()
            .filter_map(|a| Literal::from_atom(&a.substitute(&map), true))
            .collect()
    }

    /// Shared knowledge plus the focus DRS read as facts about skolem
    /// constants.
    fn working(&self, st: &DialogState, d: &LambdaDrs) -> PartialInterpretation {
        let mut w = st.shared.clone();
        for lit in Self::skolemized(d) {
            // a user-asserted fact that clashes with shared knowledge is ignored
            let _ = w.assert_literal(&lit);
        }
        w
    }

    /// The most specific defined concept whose conjuncts hold of the main
    /// referent, leaving aside conjuncts that depend on user relations.
    /// Specificity is the number of unfolded conjuncts; ties go to the
    /// concept declared first.
    pub fn infer_target(&self, d: &LambdaDrs, shared: &PartialInterpretation) -> Option<String> {
        let main = d.body.var_referents().next().map(|(v, _)| skolem(v))?;
        let mut w = shared.clone();
        for lit in Self::skolemized(d) {
            let _ = w.assert_literal(&lit);
        }
        let kb = facts_of(&w);
        let mut best: Option<(usize, &String)> = None;
        for name in self.t.definitions.keys() {
            let Ok(unfolded) = self.t.unfold(&ConceptExpr::atomic(name.clone())) else {
                continue;
            };
            let conjuncts = unfolded.conjuncts();
            let entailed = conjuncts.iter().all(|c| {
                c.mentions_role_in(&self.user_rel)
                    || instance_check(&main, c, &self.t, &kb).is_ok_and(|s| s.is_proved())
            });
            if entailed && best.is_none_or(|(n, _)| conjuncts.len() > n) {
                best = Some((conjuncts.len(), name));
            }
        }
        best.map(|(_, n)| n.clone())
    }

    fn start_focus(&self, st: &mut DialogState, d: LambdaDrs) -> SystemAction {
        if d.body.is_empty() {
            return SystemAction::Clarify {
                reason: "EmptyQuery".into(),
                text: "Sorry, I do not know what you are asking for.".into(),
            };
        }
        // user-relation facts stated inside the question become shared
        let mut volunteered = false;
        for a in &d.body.conditions {
            if self.user_rel.contains(&a.pred) {
                if let Some(lit) = Literal::from_atom(a, true) {
                    volunteered |= st.shared.assert_literal(&lit).is_ok();
                }
            }
        }
        let target = self.infer_target(&d, &st.shared);
        let main = d.body.var_referents().next().map(|(v, _)| skolem(v));
        if main.is_none() && volunteered {
            st.focus = None;
            st.agenda.clear();
            return SystemAction::Inform {
                results: Vec::new(),
                text: "Noted.".into(),
            };
        }
        st.agenda.clear();
        st.focus = Some(Focus {
            query: d,
            target,
            main,
            asked: BTreeSet::new(),
            questions_asked: 0,
            ionic_count: 0,
        });
        self.advance(st)
    }

    /// Binds an answer to the first open goal it matches; an answer matching
    /// no goal is treated as a new question.
    pub fn bind_answer(&self, st: &mut DialogState, d: &LambdaDrs) -> SystemAction {
        let mut found: Option<(usize, BTreeMap<String, String>)> = None;
        for (idx, g) in st.agenda.iter().enumerate() {
            if g.status == GoalStatus::Answered {
                continue;
            }
            let by_atom = d.body.conditions.iter().find_map(|a| g.match_atom(a));
            let by_name = || {
                let vars = g.open_vars();
                match (is_bare_name(d), vars.as_slice()) {
                    (true, [v]) => d.body.referents[0]
                        .term
                        .as_const()
                        .map(|c| BTreeMap::from([(v.to_string(), c.to_string())])),
                    _ => None,
                }
            };
            if let Some(b) = by_atom.or_else(by_name) {
                found = Some((idx, b));
                break;
            }
        }
        let Some((idx, bindings)) = found else {
            return self.start_focus(st, d.clone());
        };

        let goal = st.agenda[idx].clone();
        let facts = self.parser().facts().union(&facts_of(&st.shared));
        for (v, c) in &bindings {
            if let Some(sort) = goal.var_sorts.get(v) {
                let ok = instance_check(c, &ConceptExpr::atomic(sort.clone()), &self.t, &facts)
                    .is_ok_and(|s| s.is_proved());
                if !ok {
                    return SystemAction::Clarify {
                        reason: "SortMismatch".into(),
                        text: format!("Sorry, {} is not a {sort}.", self.lex.display_name(c)),
                    };
                }
            }
        }
        let map: BTreeMap<String, Term> = bindings
            .iter()
            .map(|(v, c)| (v.clone(), Term::constant(c.clone())))
            .collect();
        let Some(lit) = Literal::from_atom(&goal.justification.substitute(&map), true) else {
            return SystemAction::Clarify {
                reason: "IncompleteAnswer".into(),
                text: generate_question(&goal, &self.t).0,
            };
        };
        if let Err(e) = st.shared.assert_literal(&lit) {
            return SystemAction::Clarify {
                reason: "InconsistentExtension".into(),
                text: format!("Sorry, that contradicts what I know ({e})."),
            };
        }
        st.agenda[idx].status = GoalStatus::Answered;
        self.advance(st)
    }

    fn walk_focus(&self, st: &DialogState, focus: &Focus) -> (Walk, PartialInterpretation) {
        let w = self.working(st, &focus.query);
        let mut out = Walk::default();
        if let (Some(target), Some(main)) = (&focus.target, &focus.main) {
            if let Ok(unfolded) = self.t.unfold(&ConceptExpr::atomic(target.clone())) {
                let f = Translator::with_user_rel(&self.t, self.user_rel.clone()).concept_at(
                    &unfolded,
                    &Term::constant(main.clone()),
                    &mut BTreeSet::new(),
                );
                walk(&f, &Bindings::new(), &w, &mut out);
            }
        }
        (out, w)
    }

    /// The solver query of a focus: its role atoms outside the user
    /// relations, skolems turned back into variables.
    fn build_query(&self, focus: &Focus, walk: &Walk) -> ConjunctiveQuery {
        let skolems = Self::skolems(&focus.query);
        let mut atoms: Vec<Atom> = Vec::new();
        let own = focus
            .query
            .body
            .conditions
            .iter()
            .map(|a| {
                a.substitute(
                    &skolems
                        .iter()
                        .map(|(v, c)| (v.clone(), Term::Const(c.clone())))
                        .collect(),
                )
            });
        for a in walk.atoms.iter().cloned().chain(own) {
            if a.args.len() == 2 && !self.user_rel.contains(&a.pred) && !atoms.contains(&a) {
                atoms.push(a);
            }
        }

        let mut taken: BTreeSet<String> = skolems.keys().cloned().collect();
        let mut renaming: BTreeMap<String, String> = BTreeMap::new();
        let atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|a| {
                let args = a
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Const(c) => match c.strip_prefix(SKOLEM_PREFIX) {
                            Some(v) => Term::var(v),
                            None => t.clone(),
                        },
                        Term::Var(v) => {
                            let name = renaming
                                .entry(v.clone())
                                .or_insert_with(|| {
                                    let n = fresh_name(v, &taken);
                                    taken.insert(n.clone());
                                    n
                                })
                                .clone();
                            Term::var(name)
                        }
                    })
                    .collect();
                Atom::new(a.pred, args)
            })
            .collect();
        let mut atoms = atoms;
        atoms.sort_by_key(|a| a.to_string());
        ConjunctiveQuery::new(atoms)
    }

    /// Constants that could fill a single-variable goal: not ruled out by the
    /// shared knowledge, and giving the solver at least one answer.
    fn candidates(&self, goal: &Goal, w: &PartialInterpretation, query: &ConjunctiveQuery) -> Vec<String> {
        let [var] = goal.open_vars()[..] else {
            return Vec::new();
        };
        let Some(sort) = goal.var_sorts.get(var) else {
            return Vec::new();
        };
        w.members(sort)
            .into_iter()
            .filter(|c| {
                let map = BTreeMap::from([(var.to_string(), Term::constant(c.clone()))]);
                let inst = goal.justification.substitute(&map);
                let args: Vec<&str> = inst.ground_args().unwrap_or_default();
                if w.value(&inst.pred, &args) == TruthValue::F {
                    return false;
                }
                // the goal variable may occur in the query under its own name
                let q = ConjunctiveQuery::new(query.atoms.iter().map(|a| a.substitute(&map)).collect());
                q.atoms.is_empty() || self.solver.eval_query(&q).is_ok_and(|rows| !rows.is_empty())
            })
            .collect()
    }

    fn render_results(&self, q: &ConjunctiveQuery, rows: &[SolverBinding]) -> String {
        if rows.is_empty() {
            return "Sorry, I found no connection.".to_string();
        }
        let parts: Vec<String> = rows
            .iter()
            .map(|r| {
                q.answer_vars
                    .iter()
                    .map(|v| format!("{v} = {}", self.lex.display_name(&r[v])))
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect();
        let noun = if rows.len() == 1 { "answer" } else { "answers" };
        format!("I found {} {noun}: {}.", rows.len(), parts.join("; "))
    }

    fn close_focus(st: &mut DialogState) {
        st.focus = None;
        st.agenda.clear();
        st.pending_suggestion = None;
    }

    /// Re-evaluates the focus: asks or suggests for the first open goal, or
    /// queries the solver once nothing is missing.
    fn advance(&self, st: &mut DialogState) -> SystemAction {
        let Some(mut focus) = st.focus.clone() else {
            return SystemAction::Inform {
                results: Vec::new(),
                text: "Noted.".into(),
            };
        };
        let (walk, w) = self.walk_focus(st, &focus);
        focus.ionic_count = walk.ionic_seen;

        if let Some(instance) = &walk.blocked {
            Self::close_focus(st);
            return SystemAction::Inform {
                results: Vec::new(),
                text: format!("Sorry, no connection satisfies your constraints ({instance} does not hold)."),
            };
        }

        let query = self.build_query(&focus, &walk);
        if let Some(goal) = walk.goals.first().cloned() {
            st.agenda = walk.goals.clone();
            let candidates = self.candidates(&goal, &w, &query);
            if let [only] = candidates.as_slice() {
                let var = goal.open_vars()[0].to_string();
                let map = BTreeMap::from([(var, Term::constant(only.clone()))]);
                let lit = Literal::from_atom(&goal.justification.substitute(&map), true)
                    .expect("single open variable is now bound");
                st.agenda[0].status = GoalStatus::Suggested;
                st.pending_suggestion = Some(lit.clone());
                st.focus = Some(focus);
                return SystemAction::Suggest {
                    binding: lit,
                    text: format!("Do you mean {}?", self.lex.display_name(only)),
                };
            }
            let (text, expected_sort) = generate_question(&goal, &self.t);
            let key = goal.key();
            let action = if focus.asked.contains(&key) {
                SystemAction::Clarify {
                    reason: "Unanswered".into(),
                    text: format!("I still need to know: {text}"),
                }
            } else {
                focus.asked.insert(key);
                focus.questions_asked += 1;
                SystemAction::AskQuestion {
                    goal,
                    text,
                    expected_sort,
                }
            };
            st.focus = Some(focus);
            return action;
        }

        Self::close_focus(st);
        if query.atoms.is_empty() {
            return SystemAction::Inform {
                results: Vec::new(),
                text: "Noted.".into(),
            };
        }
        match self.solver.eval_query(&query) {
            Ok(rows) => SystemAction::Inform {
                text: self.render_results(&query, &rows),
                results: rows,
            },
            Err(e) => SystemAction::Clarify {
                reason: "SolverError".into(),
                text: format!("Sorry, the timetable could not answer ({e})."),
            },
        }
    }

    /// The solver query the current focus would issue now.
    pub fn pending_query(&self, st: &DialogState) -> Option<ConjunctiveQuery> {
        let focus = st.focus.as_ref()?;
        let (walk, _) = self.walk_focus(st, focus);
        Some(self.build_query(focus, &walk))
    }
}

/// Functional form of [`DialogEngine::interpret_turn`].
pub fn interpret_turn(text: &str, state: &DialogState, engine: &DialogEngine) -> (DialogState, SystemAction) {
    engine.interpret_turn(text, state)
}
