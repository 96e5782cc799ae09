//! Certified lower bounds on ergotropy from partial measurement data.

pub mod error;
pub mod ergotropy;
pub mod linalg;
pub mod measurement;
pub mod models;
pub mod pauli;
pub mod random;
pub mod sdp;
pub mod analytic;
pub mod certification;
pub mod harness;

pub use error::{Error, Result};
