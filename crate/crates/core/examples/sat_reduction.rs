//! The SDP built from the clause (u1 ∨ u2 ∨ ¬u3) and the sequence induced by
//! u1 = true, u2 = u3 = false.

use frkit::kernel::DEFAULT_RANK_TOL;
use frkit::sat_reduce::{
    assignment_to_sequence, build_msd_sdp_unchecked, parse_dimacs, Assignment,
};
use frkit::sdp_fr::verify_sequence_sdp;

fn main() -> frkit::Result<()> {
    let cnf = parse_dimacs("p cnf 3 1\n1 2 -3 0\n")?;
    let r = build_msd_sdp_unchecked(&cnf)?;
    println!("n = {}, m = {}, d = {}", r.sdp.n, r.sdp.m(), r.d);
    println!("labels {:?}", r.universe.triples);
    let a: Assignment = "1,0,0".parse()?;
    let seq = assignment_to_sequence(&r, &a)?;
    for (i, face) in seq.faces.iter().enumerate() {
        let s: Vec<_> = face
            .block_support()
            .expect("block faces")
            .iter()
            .map(|&k| r.universe.triples[k])
            .collect();
        println!("S{i} = {s:?}");
    }
    let report = verify_sequence_sdp(&r.sdp, &seq, DEFAULT_RANK_TOL)?;
    println!("valid {} length {}", report.valid, report.length);
    Ok(())
}
