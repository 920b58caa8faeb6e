//! Numeric foundation: exact rationals, an exact simplex solver, and a dense
//! symmetric eigensolver.

pub mod eigen;
pub mod matrix;
pub mod rational;
pub mod simplex;

pub use eigen::{
    classify_spectrum, psd_rank, sym_eig, EigResult, SymMatrixF, DEFAULT_EIG_TOL, DEFAULT_RANK_TOL,
};
pub use matrix::{dot, RationalMatrix};
pub use rational::Rational;
pub use simplex::{lp_solve, LpOutcome, LpTask, StandardLp, StandardOutcome};
