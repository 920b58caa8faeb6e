//! Facial reduction over the nonnegative orthant.
//!
//! On the orthant every minimal facial reduction sequence is a longest one,
//! so [`fra_minimal`] computes the maximum singularity degree exactly.
//! [`brute_force_msd`] is an exhaustive oracle for small instances.

pub mod bounds;
pub mod exposing;
pub mod fra;
pub mod generators;
pub mod ops;
pub mod oracle;
pub mod types;

pub use bounds::{duplicated_block_matrix, msd_upper_bound_blocks};
pub use exposing::{
    find_exposing, find_minimal_exposing, find_minimal_exposing_ordered, is_minimal_step,
    max_support_exposing, TieBreak,
};
pub use fra::{
    fra_minimal, fra_minimal_ordered, minimal_cone_lp, msd_lp, sd_lp, verify_sequence_lp,
    LpVerifyReport, StepDiagnosis,
};
pub use generators::{allone_lp, exm1_lp, match_matrix_lp, random_feasible_lp, slater_lp, MatchLp};
pub use ops::{remove_variable, swap_steps, Removal, RemovalCase};
pub use oracle::{brute_force_explore, brute_force_msd, Exploration, DEFAULT_BRUTE_CAP};
pub use types::{FRSequenceLP, LinearSet, LpExposingVector, OrthantFace};
