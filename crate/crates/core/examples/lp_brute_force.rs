//! Greedy minimal reduction against exhaustive enumeration of the face
//! lattice on random feasible systems.

use frkit::lp_fr::{brute_force_msd, msd_lp, random_feasible_lp, DEFAULT_BRUTE_CAP};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> frkit::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut hist = [0usize; 9];
    for _ in 0..100 {
        let set = random_feasible_lp(&mut rng, 8, 4);
        let greedy = msd_lp(&set)?;
        let brute = brute_force_msd(&set, DEFAULT_BRUTE_CAP)?;
        assert_eq!(greedy, brute);
        hist[greedy] += 1;
    }
    println!("100 systems agree; maximum singularity degree histogram {hist:?}");
    Ok(())
}
