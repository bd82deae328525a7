//! Exact integer linear algebra.
//!
//! Smith and Hermite normal forms over arbitrary-precision integers, kernels, images,
//! lattice membership, and the subquotient machinery every homology computation reads
//! its groups from. Pivoting is deterministic: smallest nonzero absolute value first,
//! ties broken by lowest row-major index.

mod echelon;
mod group;
mod lattice;
mod matrix;
mod snf;

pub use echelon::{
    image_basis, inverse_unimodular, is_surjective, kernel_basis, rank, solve_in_lattice,
    ColumnEchelon,
};
pub use group::{cokernel, direct_sum_all, FgAbGroup};
pub use lattice::{exact_at, homology_at, same_lattice, FgMap, Presentation, Subquotient};
pub use matrix::{is_zero_vector, IntMatrix, IntVector};
pub use snf::{snf, Smith};
