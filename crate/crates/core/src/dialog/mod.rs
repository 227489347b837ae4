//! Dialog management: a focus (the question under discussion), goals read
//! off the open ionic subformulas of its translated target concept, and the
//! choice of the next system action.

mod engine;
mod goals;

pub use engine::{
    interpret_turn, DialogEngine, DialogState, Focus, HistoryEntry, Speaker, SystemAction,
};
pub use goals::{extract_goals, generate_question, Goal, GoalStatus};
