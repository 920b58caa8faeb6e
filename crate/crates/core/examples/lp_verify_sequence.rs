//! Checks a hand-written sequence: certificate validity, face transitions,
//! minimality of every step, and a JSON round trip.

use frkit::kernel::Rational;
use frkit::lp_fr::{exm1_lp, verify_sequence_lp, FRSequenceLP, LpExposingVector, OrthantFace};

fn main() -> frkit::Result<()> {
    let ex = exm1_lp();
    let set = &ex.set;
    // Row 1 of M exposes x_(1,1) and x_(1,3) at once.
    let coarse =
        LpExposingVector::from_multiplier(set, [1, 0, 0, 0, 0].map(Rational::from).to_vec());
    let start = OrthantFace::full(set.n());
    let next = start.with_zeros([0, 1]);
    let mut seq = FRSequenceLP::empty(start);
    seq.steps.push(coarse);
    seq.faces.push(next);
    let report = verify_sequence_lp(set, &seq)?;
    println!(
        "valid {} minimal {} complete {}",
        report.valid, report.minimal, report.complete
    );
    for s in &report.steps {
        println!(
            "  step {}: exposed {:?} minimal {}",
            s.step + 1,
            s.exposed,
            s.minimal
        );
    }
    let text = serde_json::to_string(&seq).expect("sequence serializes");
    println!("{text}");
    let back: FRSequenceLP = serde_json::from_str(&text).expect("sequence parses");
    assert_eq!(back, seq);
    Ok(())
}
