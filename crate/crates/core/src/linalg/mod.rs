pub mod hnf;
pub mod kernel;
pub mod lattice;
pub mod lll;
pub mod matrix;
pub mod minima;
pub mod real;

pub use hnf::{hnf, snf};
pub use kernel::{small_kernel_basis, KernelReport};
pub use lattice::{integer_kernel, lattice_volume, GramForm, IntegerLattice};
pub use lll::{lll_reduce, ReducedBasis};
pub use matrix::IntMatrix;
pub use minima::{successive_minima, MinimaReport};
pub use real::RealMatrix;
