//! Exact scalars, alpha-polynomials, sparse matrices and rank/kernel computations.

mod poly;
mod rank;
mod rational;
mod scalar;
mod sparse;

pub use poly::AlphaPoly;
pub use rank::{rank, rank_kernel, KernelImage};
pub use rational::Rational;
pub use scalar::Scalar;
pub use sparse::{anticommutator, commutator, SparseMat};
