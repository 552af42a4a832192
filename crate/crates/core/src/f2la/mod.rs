//! Bit-packed GF(2) vectors and matrices.

pub mod io;
mod matrix;
mod vector;

pub use io::MatrixFormat;
pub use matrix::{BitMatrix, EchelonBasis, StandardFormDecomposition};
pub use vector::{wedge_weight, BitVector};
