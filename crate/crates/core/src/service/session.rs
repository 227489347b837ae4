use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use super::log::LogMode;
use crate::dialog::{DialogEngine, DialogState, SystemAction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error("UnknownSession: {0}")]
    UnknownSession(String),
    #[error("InvalidBody: {0}")]
    InvalidBody(String),
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::UnknownSession(_) => "UnknownSession",
            ServiceError::InvalidBody(_) => "InvalidBody",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenGoal {
    pub role: String,
    pub var: String,
    pub sort: String,
}

/// The reply to one utterance, as sent over the wire.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TurnResponse {
    /// Speech act of the system turn.
    pub act: String,
    /// `ask`, `suggest`, `inform` or `clarify`.
    pub action: String,
    pub user_act: String,
    pub text: String,
    pub open_goals: Vec<OpenGoal>,
    pub drs_box: String,
}

pub fn open_goals(st: &DialogState) -> Vec<OpenGoal> {
    st.open_goals()
        .flat_map(|g| {
            g.open_vars().into_iter().map(|v| OpenGoal {
                role: g.origin_role.clone(),
                var: v.to_string(),
                sort: g.var_sorts.get(v).cloned().unwrap_or_default(),
            })
        })
        .collect()
}

pub fn turn_response(st: &DialogState, action: &SystemAction) -> TurnResponse {
    let user_act = st
        .history
        .iter()
        .rev()
        .find(|e| e.turn == st.turn && e.speaker == crate::dialog::Speaker::User)
        .map(|e| e.act.to_string())
        .unwrap_or_default();
    TurnResponse {
        act: action.act().to_string(),
        action: action.kind().to_string(),
        user_act,
        text: action.text().to_string(),
        open_goals: open_goals(st),
        drs_box: st.last_drs.as_ref().map(|d| d.render_box()).unwrap_or_default(),
    }
}

/// A JSON dump of a session for debugging clients.
pub fn state_dump(id: &str, st: &DialogState) -> Value {
    let shared: Vec<String> = st.shared.literals().iter().map(ToString::to_string).collect();
    json!({
        "sessionId": id,
        "turn": st.turn,
        "userConst": st.user_const,
        "openGoals": open_goals(st),
        "agenda": st.agenda,
        "focus": st.focus.as_ref().map(|f| json!({
            "target": f.target,
            "query": f.query.to_string(),
            "questionsAsked": f.questions_asked,
        })),
        "pendingSuggestion": st.pending_suggestion.as_ref().map(ToString::to_string),
        "shared": shared,
        "history": st.history,
        "lastDrs": st.last_drs.as_ref().map(|d| d.render_box()),
    })
}

/// All live sessions over one engine. Turns on the same session run one at
/// a time; different sessions proceed independently.
pub struct SessionStore {
    engine: Arc<DialogEngine>,
    sessions: Mutex<HashMap<String, Arc<Mutex<DialogState>>>>,
    next_id: AtomicU64,
    log: LogMode,
}

impl SessionStore {
    pub fn new(engine: Arc<DialogEngine>) -> Self {
        SessionStore::with_log(engine, LogMode::Off)
    }

    pub fn with_log(engine: Arc<DialogEngine>, log: LogMode) -> Self {
        SessionStore {
            engine,
            sessions: Mutex::new(HashMap::new()),
            next_id: AtomicU64::new(1),
            log,
        }
    }

    pub fn engine(&self) -> &DialogEngine {
        &self.engine
    }

    pub fn create(&self) -> String {
        let id = format!("s{}", self.next_id.fetch_add(1, Ordering::Relaxed));
        let st = Arc::new(Mutex::new(self.engine.new_state()));
        self.sessions.lock().expect("session map poisoned").insert(id.clone(), st);
        id
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<DialogState>>, ServiceError> {
        self.sessions
            .lock()
            .expect("session map poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::UnknownSession(id.to_string()))
    }

    pub fn handle_utterance(&self, id: &str, text: &str) -> Result<TurnResponse, ServiceError> {
        let session = self.session(id)?;
        let mut st = session.lock().expect("session poisoned");
        let action = self.engine.turn(&mut st, text);
        self.log.log_turn(id, &st, &action);
        Ok(turn_response(&st, &action))
    }

    pub fn state(&self, id: &str) -> Result<Value, ServiceError> {
        let session = self.session(id)?;
        let st = session.lock().expect("session poisoned");
        Ok(state_dump(id, &st))
    }

    /// A copy of the session's current state.
    pub fn snapshot(&self, id: &str) -> Result<DialogState, ServiceError> {
        let session = self.session(id)?;
        let st = session.lock().expect("session poisoned");
        Ok(st.clone())
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("session map poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
