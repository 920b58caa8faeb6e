pub mod cli;
pub mod error;
pub mod kernel;
pub mod lp_fr;
pub mod sat_reduce;
pub mod sdp_fr;

pub use error::{Error, Result};
