pub mod cli;
pub mod error;
pub mod means;
pub mod numkernel;
pub mod pulm;
pub mod sector;
pub mod verifier;

pub use error::{Error, Result};
