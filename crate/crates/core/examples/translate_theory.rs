//! Prints the partial-information theory of the train domain.

use dialog_core::{fixtures, tau};

fn main() {
    let t = fixtures::train_terminology();
    println!("user relations: {:?}", t.user_rel());
    print!("{}", tau::render_theory(&tau::translate_terminology(&t)));
}
