//! Ranks of exposing vectors `Σ y_i A_i` on a five-dimensional example.

use frkit::kernel::DEFAULT_RANK_TOL;
use frkit::sdp_fr::{rank_of_exposing, sdpex2};

fn main() -> frkit::Result<()> {
    let p = sdpex2();
    for y in [
        [0.0, 0.0, 1.0],
        [1.0, 1.0, 0.0],
        [1.0, 0.5, 0.0],
        [1.0, 0.0, 2.0],
        [1.0, 2.0, 2.0],
    ] {
        let (valid, rank) = rank_of_exposing(&p, &y, DEFAULT_RANK_TOL)?;
        println!("y = {y:?}: exposing {valid}, rank {rank}");
    }
    Ok(())
}
