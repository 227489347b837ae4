//! Conjunctive queries against the bundled timetable.

use dialog_core::fixtures;
use dialog_core::solver::{eval_query, render_rows, ConjunctiveQuery};

fn main() {
    let kb = fixtures::timetable(&fixtures::train_terminology());
    for src in [
        "At(t,x) & From(t,Milan) & To(t,Rome)",
        "From(t,s) & To(t,Rome)",
        "At(t,x) & From(t,Milan) & To(t,Venice)",
        "Serves(t,s)",
    ] {
        println!("? {src}");
        let q = ConjunctiveQuery::parse(src, &kb).expect("well-formed query");
        match eval_query(&q, &kb) {
            Ok(rows) => print!("{}", render_rows(&q, &rows)),
            Err(e) => println!("error: {e}"),
        }
        println!();
    }
}
