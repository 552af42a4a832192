//! Construction and analysis of quantum pin codes.

pub mod error;
pub mod f2la;
pub mod relation;
pub mod builders;
pub mod csscode;
pub mod transversal;
pub mod distill;
pub mod shrunk;

pub use error::{Error, Result};
pub use f2la::{BitMatrix, BitVector};
