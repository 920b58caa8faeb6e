//! Rank-one exposing vectors found by Levenberg–Marquardt reach the longest
//! chain on the worst-case instances.

use frkit::sdp_fr::{fra_lowrank, worst_case_instance, LowRankOptions};

fn main() -> frkit::Result<()> {
    for n in 3..=8 {
        let p = worst_case_instance(n)?;
        let run = fra_lowrank(&p, &LowRankOptions::default())?;
        let worst = run.residuals.iter().copied().fold(0.0, f64::max);
        println!(
            "n = {n}: length {} ({:?}), largest residual {worst:.1e}",
            run.seq.len(),
            run.termination
        );
    }
    Ok(())
}
