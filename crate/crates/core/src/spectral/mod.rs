//! Basis construction, G-matrix assembly, the generalized eigenproblem and
//! everything computed from its eigenpairs.

mod basis;
mod decomposition;
mod diffusion;
mod eigen;
mod gft;
mod gmatrix;
mod operators;

pub use basis::{build_basis, BasisFamily, BasisKind};
pub use decomposition::{solve_spectrum, solve_spectrum_with, SolverMethod, SpectralDecomposition, DENSE_LIMIT};
pub use diffusion::{diffusion_coords, diffusion_distance, diffusion_kernel};
pub use gft::{gft, gft_unweighted, inverse_gft};
pub use gmatrix::{g_matrix, GMatrix};
pub use operators::{
    operator_g_matrix, operator_spectrum, operator_spectrum_with, shift_operator, OperatorKind, ShiftOperator,
};
