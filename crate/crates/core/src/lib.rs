//! Exact construction and verification of rank-one kernel certificates for
//! ladder matrix Lie algebras.

pub mod certificate;
pub mod error;
pub mod json;
pub mod ladder;
pub mod linalg;
pub mod matrix;
pub mod onestep;
#[cfg(test)]
mod oracle;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
