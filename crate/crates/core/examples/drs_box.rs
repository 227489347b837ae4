//! Parses utterances into λ-DRSs and prints them in box notation.

use dialog_core::dl::FactBase;
use dialog_core::fixtures;
use dialog_core::semantics::{load_lexicon, parse_utterance};

fn main() {
    let t = fixtures::train_terminology();
    let lex = load_lexicon(fixtures::TRAIN_DOMAIN, &t).expect("bundled lexicon");
    let kb: FactBase = fixtures::timetable(&t);
    for text in [
        "When does a train depart to Rome?",
        "When does a train leave to Rome?",
        "From Milan.",
        "When does a train depart to Venice?",
        "blorf",
    ] {
        println!("{text}");
        match parse_utterance(text, &lex, &t, &kb) {
            Ok((drs, act)) => {
                println!("act: {act}");
                println!("{}", drs.render_box());
                println!("as formula: {}\n", drs.to_fil());
            }
            Err(e) => println!("error: {e}\n"),
        }
    }
}
