//! The bundled train-information domain.

use crate::dl::{load_facts, load_terminology, FactBase, Terminology};

/// Complete domain file: terminology, synonyms, question templates, lexicon.
pub const TRAIN_DOMAIN: &str = include_str!("../fixtures/train.dom");

/// Just the concept and role inventory of the train domain.
pub const DEPARTURES: &str = include_str!("../fixtures/departures.dom");

pub const TIMETABLE_FACTS: &str = include_str!("../fixtures/timetable.facts");

/// # Panics
/// Panics if the bundled domain file does not load.
pub fn train_terminology() -> Terminology {
    load_terminology(TRAIN_DOMAIN).expect("bundled domain loads")
}

/// # Panics
/// Panics if the bundled timetable does not load.
pub fn timetable(t: &Terminology) -> FactBase {
    load_facts(TIMETABLE_FACTS, t).expect("bundled timetable loads")
}
