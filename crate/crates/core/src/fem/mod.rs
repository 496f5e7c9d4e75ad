//! First-order finite elements for the Steklov problem on star domains.
//!
//! Interior unknowns are eliminated by a Schur complement, leaving a dense
//! generalized eigenproblem on the boundary (the discrete
//! Dirichlet-to-Neumann map).

mod assembly;
mod mesh;
mod solve;
mod sparse;

pub use assembly::{assemble, assemble_with, AssemblyMethod, SteklovSystem};
pub use mesh::{mesh_star_domain, Mesh, MeshStats, BASE_BOUNDARY_NODES};
pub use solve::{
    convergence_rate, generalized_eigen, schur_complement, solve_with_options, solve_with_refinement, steklov_solve,
    BoundaryTrace, DtnOperator, RefinedSpectrum, RefinementOptions, SteklovSpectrum,
};
pub use sparse::{BandCholesky, CsrMatrix};
