//! Satisfiability against maximum singularity degree on a satisfiable and
//! an unsatisfiable formula.

use frkit::sat_reduce::{certify, complete_unsat_cnf, parse_dimacs};

fn main() -> frkit::Result<()> {
    let sat = parse_dimacs("p cnf 3 3\n1 2 3 0\n-1 -2 -3 0\n1 -2 3 0\n")?;
    for (name, cnf) in [
        ("satisfiable", sat),
        ("all eight sign patterns", complete_unsat_cnf()),
    ] {
        let r = certify(&cnf, 1 << 10)?;
        println!(
            "{name}: satisfiable {}, msd {}, d {}, consistent {}",
            r.satisfiable, r.msd, r.d, r.consistent
        );
        if let Some(w) = &r.witness {
            println!(
                "  witness {} of length {}, verified {}",
                w.input_assignment, w.length, w.verified
            );
        }
    }
    Ok(())
}
