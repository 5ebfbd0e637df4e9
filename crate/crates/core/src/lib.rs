//! Exact arithmetic and Lie-algebraic tools for rational parametrization of
//! degree-8 Del Pezzo surfaces in P^8.

pub mod arith;
pub mod conic;
pub mod dp8;
pub mod error;
pub mod field;
pub mod lattice;
pub mod lie;
pub mod linalg;
pub mod modrep;
mod modular;
pub mod parse;
pub mod poly;
pub mod quadform;

pub use error::{Error, Result};
pub use field::{QuadExt, Rational, Scalar};
