//! The duplicated block bound against the exact value for a match matrix
//! with one zero block.

use frkit::lp_fr::{duplicated_block_matrix, match_matrix_lp, msd_lp, msd_upper_bound_blocks};

fn main() -> frkit::Result<()> {
    let columns = vec![
        vec![true, false, false],
        vec![false, true, true],
        vec![false, false, false],
    ];
    let dup = 2 * columns.len();
    let m = duplicated_block_matrix(&columns, dup);
    let exact = msd_lp(&match_matrix_lp(&m).set)?;
    let bound = msd_upper_bound_blocks(&columns, dup)?;
    println!(
        "{} x {} matrix, exact {exact}, bound {bound}",
        m.len(),
        m[0].len()
    );
    assert!(exact <= bound);
    Ok(())
}
