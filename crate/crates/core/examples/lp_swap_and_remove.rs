//! Reordering two steps of a minimal sequence and deleting a redundant
//! variable while keeping the sequence minimal.

use frkit::lp_fr::{
    allone_lp, fra_minimal, remove_variable, swap_steps, verify_sequence_lp, OrthantFace,
};

fn main() -> frkit::Result<()> {
    let set = allone_lp(2, 2);
    let seq = fra_minimal(&set, &OrthantFace::full(set.n()))?;
    let blocks =
        |s: &frkit::lp_fr::FRSequenceLP| (0..s.len()).map(|i| s.block(i)).collect::<Vec<_>>();
    println!("greedy blocks  {:?}", blocks(&seq));
    if let Err(e) = swap_steps(&set, &seq, 0) {
        println!("steps 1 and 2 do not swap: {e}");
    }
    let swapped = swap_steps(&set, &seq, 1)?;
    println!("swapped blocks {:?}", blocks(&swapped));
    println!(
        "swapped is minimal: {}",
        verify_sequence_lp(&set, &swapped)?.minimal
    );

    let var = *seq
        .final_face()
        .zero_set()
        .iter()
        .next()
        .expect("a zero coordinate");
    let removal = remove_variable(&set, &seq, var)?;
    println!(
        "removed x{}: case {:?}, length {} -> {}, still minimal: {}",
        var + 1,
        removal.case,
        seq.len(),
        removal.seq.len(),
        removal.minimal_out
    );
    Ok(())
}
