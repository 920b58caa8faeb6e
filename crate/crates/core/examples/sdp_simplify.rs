//! Restricting an SDP to a block face and reading a diagonal SDP as an LP.

use frkit::lp_fr::msd_lp;
use frkit::sdp_fr::{
    sdp_to_lp_if_diagonal, simplify_blockdiag, DiagonalOptions, SdpFace, SdpProblem, SparseSym,
};

fn main() -> frkit::Result<()> {
    let mut coupled = SparseSym::diag(&[1.0, 0.0, 0.0, 1.0]);
    coupled.set(1, 3, 1.0);
    let p = SdpProblem::new(
        4,
        vec![
            SparseSym::diag(&[1.0, 1.0, 0.0, 0.0]),
            SparseSym::diag(&[0.0, 1.0, 1.0, 0.0]),
            coupled,
        ],
        vec![0.0; 3],
    )?;
    println!(
        "diagonal as given: {}",
        sdp_to_lp_if_diagonal(&p, DiagonalOptions::default()).is_some()
    );
    let face = SdpFace::block(4, [0, 2, 3])?;
    let small = simplify_blockdiag(&p, &face)?;
    let lp = sdp_to_lp_if_diagonal(&small, DiagonalOptions::default()).expect("block is diagonal");
    println!("restricted to order {}, LP keeps {:?}", small.n, lp.kept);
    println!("LP maximum singularity degree {}", msd_lp(&lp.set)?);
    Ok(())
}
