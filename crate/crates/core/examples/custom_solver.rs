//! Plugs a different problem solver into the dialog engine: the timetable is
//! answered by a fixed schedule table instead of the fact base.

use std::sync::Arc;

use dialog_core::dialog::DialogEngine;
use dialog_core::fil::Term;
use dialog_core::fixtures;
use dialog_core::semantics::load_lexicon;
use dialog_core::solver::{ConjunctiveQuery, ProblemSolver, SolverBinding, SolverError};

/// Departures as (train, time, from, to).
struct Schedule(Vec<(&'static str, &'static str, &'static str, &'static str)>);

impl ProblemSolver for Schedule {
    fn eval_query(&self, q: &ConjunctiveQuery) -> Result<Vec<SolverBinding>, SolverError> {
        let mut out = Vec::new();
        for &(train, time, from, to) in &self.0 {
            let mut b = SolverBinding::new();
            let fits = q.atoms.iter().all(|a| {
                let want = match a.pred.as_str() {
                    "At" => [train, time],
                    "From" => [train, from],
                    "To" => [train, to],
                    _ => return false,
                };
                a.args.iter().zip(want).all(|(t, v)| match t {
                    Term::Const(c) => c == v,
                    Term::Var(x) => b.entry(x.clone()).or_insert_with(|| v.to_string()) == v,
                })
            });
            if fits {
                out.push(q.answer_vars.iter().map(|v| (v.clone(), b[v].clone())).collect());
            }
        }
        Ok(out)
    }
}

fn main() {
    let t = fixtures::train_terminology();
    let lex = load_lexicon(fixtures::TRAIN_DOMAIN, &t).unwrap();
    let kb = fixtures::timetable(&t);
    let schedule = Schedule(vec![("ic101", "t0915", "Milan", "Rome"), ("ec77", "t1130", "Milan", "Rome")]);
    let engine = DialogEngine::new(t, lex, kb, Arc::new(schedule));

    let mut st = engine.new_state();
    for u in ["When does a train depart to Rome?", "From Milan."] {
        println!("user> {u}");
        println!("system> {}", engine.turn(&mut st, u).text());
    }
    if let Some(q) = engine.pending_query(&st) {
        println!("query sent to the solver: {q}");
    }
}
