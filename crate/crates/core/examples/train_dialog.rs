//! The train-information dialog, then a few detours: a sort mismatch, an
//! unknown word, and a suggestion on a one-train timetable.

use dialog_core::dialog::DialogEngine;
use dialog_core::fixtures::{TIMETABLE_FACTS, TRAIN_DOMAIN};

fn run(engine: &DialogEngine, script: &[&str]) {
    let mut st = engine.new_state();
    for u in script {
        let action = engine.turn(&mut st, u);
        println!("user> {u}");
        println!("system[{}]> {}", action.act(), action.text());
    }
    println!("--- transcript\n{}", st.transcript());
}

fn main() {
    let engine = DialogEngine::train();
    run(&engine, &["When does a train depart to Rome?", "From Milan."]);
    run(&engine, &["When does a train leave to Rome?", "From 9:15.", "blorf", "From Turin."]);

    let one_train: String = TIMETABLE_FACTS
        .lines()
        .filter(|l| !l.contains("ic205"))
        .map(|l| format!("{l}\n"))
        .collect();
    let small = DialogEngine::from_sources(TRAIN_DOMAIN, &one_train).expect("domain loads");
    run(&small, &["When does a train depart to Rome?", "yes"]);
    run(&small, &["When does a train depart to Rome?", "no", "From Milan."]);
}
