//! Numerical certificates for radial Schur and Fourier multipliers.

pub mod besov;
pub mod error;
pub mod gallery;
pub mod hankel;
pub mod linalg;
pub mod quad;
pub mod seqsym;
pub mod smoothbound;
pub mod toruszd;
pub mod witness;

pub use error::{Error, Result};
