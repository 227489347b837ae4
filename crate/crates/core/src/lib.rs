//! A domain-configurable dialog manager. A description-logic terminology
//! describes what a problem solver needs; partial-information formulas with
//! ionic (default) subformulas track what the user has not said yet, and the
//! dialog manager asks for it.

pub mod dialog;
pub mod dl;
pub mod drs;
pub mod fil;
pub mod fixtures;
pub mod semantics;
pub mod service;
pub mod solver;
pub mod tau;
