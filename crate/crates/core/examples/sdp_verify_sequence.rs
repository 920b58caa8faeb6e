//! Two sequences of different length on the same SDP, with rank-drop
//! certificates.

use frkit::kernel::DEFAULT_RANK_TOL;
use frkit::sdp_fr::{notminex, verify_sequence_sdp, FRSequenceSDP, SdpExposingVector, SdpFace};

fn main() -> frkit::Result<()> {
    let p = notminex();
    for picks in [vec![0, 1, 2], vec![2, 0]] {
        let steps = picks
            .iter()
            .map(|&i| SdpExposingVector::pick(&p, i))
            .collect();
        let seq = FRSequenceSDP::from_steps(SdpFace::full(p.n), steps, DEFAULT_RANK_TOL)?;
        let r = verify_sequence_sdp(&p, &seq, DEFAULT_RANK_TOL)?;
        let names: Vec<String> = picks.iter().map(|i| format!("A{}", i + 1)).collect();
        println!(
            "({}) valid {} length {} rank drops {:?} certified minimal {:?}",
            names.join(", "),
            r.valid,
            r.length,
            r.rank_drops,
            r.minimal_certified
        );
    }
    Ok(())
}
