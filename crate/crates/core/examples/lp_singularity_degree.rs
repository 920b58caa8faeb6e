//! Maximum and minimum singularity degree, minimal cone and a longest
//! sequence for the incidence system of a binary matrix.

use frkit::lp_fr::{allone_lp, exm1_lp, fra_minimal, minimal_cone_lp, msd_lp, sd_lp, OrthantFace};

fn main() -> frkit::Result<()> {
    let ex = exm1_lp();
    let seq = fra_minimal(&ex.set, &OrthantFace::full(ex.set.n()))?;
    println!("M = [[1,0,1],[1,1,0]], variables {:?}", ex.edges);
    println!("maximum singularity degree {}", seq.len());
    for (i, w) in seq.steps.iter().enumerate() {
        let y: Vec<String> = w.y.iter().map(ToString::to_string).collect();
        println!(
            "  step {}: y = [{}], zeroes {:?}",
            i + 1,
            y.join(", "),
            seq.block(i)
        );
    }
    let (sd, _) = sd_lp(&ex.set)?;
    println!("singularity degree {sd}");
    println!(
        "minimal cone zero set {:?}",
        minimal_cone_lp(&ex.set)?.zero_set_one_based()
    );

    println!("\nall-ones p x q:");
    for p in 1..=3 {
        let row: Vec<String> = (1..=4)
            .map(|q| msd_lp(&allone_lp(p, q)).map(|v| v.to_string()))
            .collect::<Result<_, _>>()?;
        println!("  p = {p}: {}", row.join(" "));
    }
    Ok(())
}
