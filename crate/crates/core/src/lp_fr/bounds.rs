use crate::error::{Error, Result};

/// Upper bound on the maximum singularity degree of the incidence system of
/// `[M_1 … M_q̃]`, where `M_j` holds `dup = 2q̃` copies of `columns[j]`.
pub fn msd_upper_bound_blocks(columns: &[Vec<bool>], dup: usize) -> Result<usize> {
    if columns.is_empty() {
        return Err(Error::PreconditionFailed("no columns".into()));
    }
    if dup == 0 || !dup.is_multiple_of(2) || columns.len() != dup / 2 {
        return Err(Error::DimensionMismatch(format!(
            "{} columns need a duplication factor of {}, got {dup}",
            columns.len(),
            2 * columns.len()
        )));
    }
    let q_tilde = dup / 2;
    let ones: Vec<usize> = columns
        .iter()
        .map(|v| v.iter().filter(|&&b| b).count())
        .collect();
    if ones.iter().all(|&c| c > 0) {
        return Ok(ones.iter().map(|c| c + dup - 1).sum());
    }
    if ones.iter().all(|&c| c <= 3) {
        return Ok((dup + 2) * (q_tilde - 1));
    }
    Err(Error::NotApplicable(
        "a zero column is present and some column has more than three ones".into(),
    ))
}

/// `[M_1 … M_q̃]` with `dup` copies of each column, as a row-major binary matrix.
pub fn duplicated_block_matrix(columns: &[Vec<bool>], dup: usize) -> Vec<Vec<bool>> {
    let p = columns.first().map_or(0, Vec::len);
    (0..p)
        .map(|i| {
            columns
                .iter()
                .flat_map(|v| std::iter::repeat_n(v[i], dup))
                .collect()
        })
        .collect()
}
