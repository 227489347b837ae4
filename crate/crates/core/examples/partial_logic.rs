//! Three-valued evaluation, ionic formulas and the four acceptance positions.

use dialog_core::fil::{
    eval_formula, ionic_status, justification_position, Bindings, FilFormula, Literal, PartialInterpretation, Term,
};

fn main() {
    let mut i = PartialInterpretation::with_universe(["u"]);
    i.assert_literal(&Literal::pos("User", &["u"])).unwrap();
    for s in ["Milan", "Rome", "Turin"] {
        i.assert_literal(&Literal::pos("Station", &[s])).unwrap();
    }

    let departs = |s: Term| FilFormula::atom("DepartFrom", vec![Term::constant("u"), s]);
    let milan = departs(Term::constant("Milan"));
    println!("{milan} = {:?}", eval_formula(&milan, &i, &Bindings::new()).unwrap());

    let default = FilFormula::ionic(vec![departs(Term::var("s"))], departs(Term::var("s"))).unwrap();
    let b = Bindings::new().with_sort("s", "Station");
    println!("{default}");
    println!("  nothing known:        {:?}", ionic_status(&default, &i, &b));

    let told = i.extend(&Literal::pos("DepartFrom", &["u", "Milan"])).unwrap();
    println!("  after DepartFrom(u,Milan): {:?}", ionic_status(&default, &told, &b));

    let at_milan = b.clone().bind("s", "Milan");
    let denied = i.extend(&Literal::neg("DepartFrom", &["u", "Milan"])).unwrap();
    println!("  s = Milan, assumed:   {:?}", ionic_status(&default, &i, &at_milan));
    println!("  s = Milan, denied:    {:?}", ionic_status(&default, &denied, &at_milan));

    for (label, interp) in [("unknown", &i), ("told", &told), ("denied", &denied)] {
        let p = justification_position(std::slice::from_ref(&milan), interp, &Bindings::new());
        println!(
            "{label:>8}: value {:?} accepted={} inacceptable={} not-acceptable={} not-inacceptable={}",
            p.value, p.accepted, p.inacceptable, p.not_acceptable, p.not_inacceptable
        );
    }
}
