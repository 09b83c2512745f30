//! Linear-algebra kernels: symmetric sparse assembly, banded Cholesky with an
//! optional dense border (for periodic seams), shift-invert Lanczos for the
//! lowest eigenpairs of K x = lambda M x with diagonal M, and dense fallbacks.

mod banded;
mod dense;
mod lanczos;
mod sparse;

pub use banded::{BandedCholesky, BorderedSolver};
pub use dense::{dense_generalized_eigen, DenseEigen};
pub use lanczos::{shift_invert_lowest, EigenPair, LanczosOptions};
pub use sparse::SymmetricSparse;
