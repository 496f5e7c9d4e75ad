//! Steklov eigenvalues of star-shaped domains in the Euclidean and hyperbolic
//! plane, the radial formulas for geodesic balls, and numerical certificates
//! for the harmonic-mean isoperimetric inequalities.

pub mod constructions;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod quadrature;
pub mod radial;

pub use constructions::{CertificateReport, Check};
pub use error::{Result, SteklovError};
pub use fem::{solve_with_refinement, RefinedSpectrum, SteklovSpectrum};
pub use geometry::{Point, StarDomain, TangentVector};
pub use radial::{RadialProfile, SpaceForm};
