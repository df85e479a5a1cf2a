pub mod bipartite;
pub mod cli;
pub mod ensembles;
pub mod error;
pub mod majorize;
pub mod numkernel;
pub mod protocol;
pub mod random;

pub use error::{Error, MajorizationViolation, Result};
