//! Loads a domain file, checks a few instances and shows where the load-time
//! checks stop a broken terminology.

use dialog_core::dl::{instance_check, load_terminology, parse_concept};
use dialog_core::fixtures;

fn main() {
    let t = fixtures::train_terminology();
    let kb = fixtures::timetable(&t);
    println!("primitive concepts: {:?}", t.primitive_concepts);
    println!("defined concepts:   {:?}", t.definitions.keys().collect::<Vec<_>>());
    println!("user relations:     {:?}", t.user_rel());

    for (a, c) in [
        ("ic101", "Train and Depart"),
        ("ic101", "exists To.Station"),
        ("Rome", "ArrStation"),
        ("Rome", "Time"),
    ] {
        let concept = parse_concept(c).expect("valid concept");
        let status = instance_check(a, &concept, &t, &kb).expect("known names");
        println!("{a} : {c} -> {status:?}");
    }

    let unfolded = t.unfold(&parse_concept("TrainAtFromTo").unwrap()).unwrap();
    println!("TrainAtFromTo unfolds to {unfolded}");

    for broken in ["concept A\ndefine B = A and C\n", "concept A\ndefine X = A and Y\ndefine Y = X\n"] {
        match load_terminology(broken) {
            Ok(_) => println!("loaded unexpectedly"),
            Err(e) => println!("rejected: {e}"),
        }
    }
}
