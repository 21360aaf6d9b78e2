//! Tensor product decompositions of polynomial U(k) representations and
//! explicit covariant invariants.

pub mod cg;
pub mod cli;
pub mod contragredient;
pub mod error;
pub mod fock;
pub mod invariants;
pub mod linalg;
pub mod lr_oracle;
pub mod poly;
pub mod signature;
pub mod weyl;

pub use error::{Error, Result};
pub use signature::{Signature, SignedSpectrum};
