//! The proof machinery for `n = 2`: center of mass, rotation alignment, the
//! test functions `g(r)·xᵢ/r`, and numerical certificates for each
//! inequality in the chain.

mod center;
mod certificates;
mod frame;

pub use center::{boundary_centroid, boundary_moment, center_of_mass, CenterOfMass, MOMENT_TOLERANCE};
pub use certificates::{
    certify, check_boundary_g2, check_f_rearrangement, check_hersch_payne, check_rayleigh_bounds, check_sum1_chain,
    check_theorem_euclidean, check_theorem_hyperbolic, volume_radius, CertificateReport, Check, DomainCertificates,
    QUADRATURE_TOL,
};
pub use frame::{
    align_rotation, grad_norm_sq_testfn, rayleigh_testfn, rotation_constraint, TestFunctionFrame,
    TestFunctionQuotients,
};
