//! Exact integer and rational linear algebra.

mod lattice;
mod matrix;
mod rational;
mod smith;

pub use lattice::{
    integral_preimage_lattice, integral_solutions, lattice_coordinates, rational_lattice_basis,
};
pub use matrix::Matrix;
pub use rational::{
    has_independent_columns, image_basis, inverse, kernel_basis, left_annihilator, rank,
    rational_rank_kernel_image, rref, solve, solve_matrix, RankKernelImage,
};
pub use smith::{
    cokernel_invariants, hermite_normal_form, integer_kernel_basis, smith_normal_form,
    FgAbelianGroup, SmithDecomposition,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("lattice generators are linearly dependent")]
    DependentLattice,
}
