//! Facial reduction over the PSD cone: face arithmetic through subspace
//! bases, sequence verification with rank-drop certificates, reduction of
//! block-diagonal instances to the orthant, and a low-rank exposing-vector
//! search.

pub mod face;
pub mod lowrank;
pub mod problem;
pub mod sequence;
pub mod simplify;
pub mod sparse;

pub use face::{
    apply_fr_step, check_exposing_sdp, orthonormalize, rank_of_exposing, restricted_spectrum,
    ExposingStatus, RestrictedSpectrum, SdpExposingVector, SdpFace,
};
pub use lowrank::{
    fra_lowrank, lowrank_exposing_search, multistart_search, LowRankHit, LowRankOptions,
    LowRankRun, Termination,
};
pub use problem::{notminex, sdpex2, worst_case_instance, SdpProblem};
pub use sequence::{verify_sequence_sdp, FRSequenceSDP, SdpStepDiagnosis, SdpVerifyReport};
pub use simplify::{sdp_to_lp_if_diagonal, simplify_blockdiag, DiagonalLp, DiagonalOptions};
pub use sparse::SparseSym;
