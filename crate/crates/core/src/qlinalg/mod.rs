//! Exact linear algebra over Q: reduced echelon forms, kernels and images,
//! homology of a pair of composable maps, and canonical subspaces.

mod matrix;
mod subspace;

pub use matrix::{RatMatrix, Rref, SparseVec};
pub use subspace::{homology, image, kernel, Frame, Homology, IncrementalBasis, Label, Subspace};
