//! Computable pieces of the unlikely-intersections toolkit: exact lattice
//! algebra, toric defect calculus, modular polynomials and the j-function,
//! polarized complex tori, heights, and bounded-height counting.

pub mod abelian;
pub mod algebraic;
pub mod cli;
pub mod counting;
pub mod error;
pub mod linalg;
pub mod modular;
pub mod numeric;
pub mod poly;
pub mod torus;

pub use error::{Error, Result};
