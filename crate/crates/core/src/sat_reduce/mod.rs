//! The 3SAT reduction: DIMACS ingestion, preprocessing to the occurrence
//! assumption, clause duplication, the SDP instance, FR sequences induced by
//! satisfying assignments, and exact maximum singularity degree through the
//! reduced orthant systems.

pub mod certify;
pub mod cnf;
pub mod reduction;

pub use certify::{certify, CertifyReport, Witness};
pub use cnf::{
    brute_force_sat, check_budget, complete_unsat_cnf, duplicate_clauses,
    enumerate_three_variable_cnfs, parse_dimacs, pattern_clause, preprocess,
    random_preprocessed_satisfiable, random_satisfiable_cnf, Assignment, Clause, CnfInstance,
    Literal, Preprocessed,
};
pub use reduction::{
    assignment_support, assignment_to_sequence, build_msd_sdp, build_msd_sdp_unchecked,
    exact_msd_detail, exact_msd_of_reduction, match_matrix, reduced_lp_for_assignment, ClauseSets,
    ExactMsd, IndexUniverse, ReductionInstance, ReductionMeta, Triple, TruthSets,
};
