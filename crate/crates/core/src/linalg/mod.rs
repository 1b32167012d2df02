//! Exact dense and sparse linear algebra over [`Field`](crate::field::Field)s.

mod echelon;
mod matrix;
mod sparse;
mod subspace;

pub use echelon::{complement_in, left_kernel_sparse, Echelon};
pub use matrix::{kernel_basis, left_kernel_basis, rank, rref, Matrix, Rref};
pub(crate) use matrix::rref_in_place;
pub use sparse::{from_dense, scale_sparse, to_dense, SparseAccumulator, SparseVec};
pub use subspace::{intersect, sum, tensor_position_embed, Subspace};
