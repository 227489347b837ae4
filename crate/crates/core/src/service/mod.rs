//! Entry points around the dialog engine: a session store, its HTTP API and
//! a line-oriented REPL.

mod http;
mod log;
mod repl;
mod session;

pub use http::{router, serve, UtteranceBody};
pub use log::LogMode;
pub use repl::run_repl;
pub use session::{open_goals, state_dump, turn_response, OpenGoal, ServiceError, SessionStore, TurnResponse};
