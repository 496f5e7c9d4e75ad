//! Two-dimensional space-form geometry.
//!
//! Flat points are Cartesian pairs. Hyperbolic points live on the upper
//! sheet of the hyperboloid `−x₀² + x₁² + x₂² = −1`; only `(x₁, x₂)` is
//! stored and `x₀ = √(1 + x₁² + x₂²)` is reconstructed on demand.
//!
//! Tangent vectors are expressed in an orthonormal frame at their base point.
//! The frame at `p` is the standard frame at the pole `(1, 0, 0)` parallel
//! transported along the geodesic from the pole to `p`; in the flat case it is
//! the Cartesian frame everywhere.

mod domain;
mod isometry;

pub use domain::{
    boundary_integral, default_boundary_nodes, domain_volume, BoundaryNode, BoundaryQuadrature, InteriorNode,
    InteriorQuadrature, StarDomain,
};
pub use isometry::Isometry;

use crate::error::{Result, SteklovError};
use crate::radial::SpaceForm;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    space: SpaceForm,
    coords: [f64; 2],
}

impl Point {
    pub fn new(space: SpaceForm, x: f64, y: f64) -> Self {
        Self { space, coords: [x, y] }
    }

    pub fn origin(space: SpaceForm) -> Self {
        Self::new(space, 0.0, 0.0)
    }

    pub fn space(&self) -> SpaceForm {
        self.space
    }

    /// Cartesian coordinates (flat) or the spatial hyperboloid coordinates
    /// `(x₁, x₂)` (hyperbolic).
    pub fn coords(&self) -> [f64; 2] {
        self.coords
    }

    /// Hyperboloid time coordinate `x₀`; 1 for flat points.
    pub fn x0(&self) -> f64 {
        match self.space {
            SpaceForm::Flat => 1.0,
            SpaceForm::Hyperbolic => {
                let [a, b] = self.coords;
                (1.0 + a * a + b * b).sqrt()
            }
        }
    }

    pub fn ambient(&self) -> [f64; 3] {
        [self.x0(), self.coords[0], self.coords[1]]
    }

    /// Point of the Poincaré disk model (hyperbolic) or the Cartesian
    /// coordinates themselves (flat).
    pub fn to_poincare(&self) -> [f64; 2] {
        match self.space {
            SpaceForm::Flat => self.coords,
            SpaceForm::Hyperbolic => {
                let d = 1.0 + self.x0();
                [self.coords[0] / d, self.coords[1] / d]
            }
        }
    }

    /// Inverse of [`Point::to_poincare`]; `|z| < 1` is required for
    /// hyperbolic points.
    pub fn from_poincare(space: SpaceForm, z: [f64; 2]) -> Result<Self> {
        match space {
            SpaceForm::Flat => Ok(Self::new(space, z[0], z[1])),
            SpaceForm::Hyperbolic => {
                let n2 = z[0] * z[0] + z[1] * z[1];
                if !(n2 < 1.0) {
                    return Err(SteklovError::InvalidArgument {
                        name: "z",
                        value: n2.sqrt(),
                        reason: "Poincaré disk points must satisfy |z| < 1",
                    });
                }
                let f = 2.0 / (1.0 - n2);
                Ok(Self::new(space, f * z[0], f * z[1]))
            }
        }
    }

    /// Orthonormal frame at this point as ambient vectors.
    pub(crate) fn frame(&self) -> [[f64; 3]; 2] {
        match self.space {
            SpaceForm::Flat => [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            SpaceForm::Hyperbolic => {
                let [p1, p2] = self.coords;
                let c = 1.0 / (1.0 + self.x0());
                [
                    [p1, 1.0 + p1 * p1 * c, p1 * p2 * c],
                    [p2, p1 * p2 * c, 1.0 + p2 * p2 * c],
                ]
            }
        }
    }

    /// Ambient form of a tangent vector with frame components `v`.
    pub(crate) fn tangent_ambient(&self, v: [f64; 2]) -> [f64; 3] {
        let [e1, e2] = self.frame();
        [
            v[0] * e1[0] + v[1] * e2[0],
            v[0] * e1[1] + v[1] * e2[1],
            v[0] * e1[2] + v[1] * e2[2],
        ]
    }
}

/// Minkowski pairing `−a₀b₀ + a₁b₁ + a₂b₂`.
pub(crate) fn minkowski(a: [f64; 3], b: [f64; 3]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub base: Point,
    pub components: [f64; 2],
}

impl TangentVector {
    pub fn new(base: Point, components: [f64; 2]) -> Self {
        Self { base, components }
    }

    pub fn zero(base: Point) -> Self {
        Self::new(base, [0.0, 0.0])
    }

    /// Metric norm; equal to the Euclidean norm of the frame components.
    pub fn norm(&self) -> f64 {
        self.components[0].hypot(self.components[1])
    }
}

fn same_space(p: &Point, q: &Point) -> Result<()> {
    if p.space == q.space {
        Ok(())
    } else {
        Err(SteklovError::SpaceMismatch)
    }
}

/// `sinh(t)/t` with the removable singularity at 0.
fn sinhc(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        1.0 + t * t / 6.0
    } else {
        t.sinh() / t
    }
}

/// Exponential map at `v.base`.
pub fn exp_map(v: &TangentVector) -> Point {
    let p = v.base;
    match p.space {
        SpaceForm::Flat => Point::new(
            p.space,
            p.coords[0] + v.components[0],
            p.coords[1] + v.components[1],
        ),
        SpaceForm::Hyperbolic => {
            let t = v.norm();
            if t == 0.0 {
                return p;
            }
            let amb = p.tangent_ambient(v.components);
            let c = t.cosh();
            let s = sinhc(t);
            Point::new(p.space, c * p.coords[0] + s * amb[1], c * p.coords[1] + s * amb[2])
        }
    }
}

/// Geodesic distance.
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    same_space(p, q)?;
    Ok(distance_unchecked(p, q))
}

pub(crate) fn distance_unchecked(p: &Point, q: &Point) -> f64 {
    let dx = p.coords[0] - q.coords[0];
    let dy = p.coords[1] - q.coords[1];
    match p.space {
        SpaceForm::Flat => dx.hypot(dy),
        SpaceForm::Hyperbolic => {
            // |P − Q|²_L = 4 sinh²(d/2); x₀ difference formed without cancellation
            let sx = p.coords[0] + q.coords[0];
            let sy = p.coords[1] + q.coords[1];
            let dt = (dx * sx + dy * sy) / (p.x0() + q.x0());
            let chord2 = (dx * dx + dy * dy - dt * dt).max(0.0);
            2.0 * (0.5 * chord2.sqrt()).asinh()
        }
    }
}

/// Logarithm map: the tangent vector at `p` whose exponential is `q`.
pub fn log_map(p: &Point, q: &Point) -> Result<TangentVector> {
    same_space(p, q)?;
    let (x1, x2, _) = normal_coordinates_unchecked(p, q);
    Ok(TangentVector::new(*p, [x1, x2]))
}

/// Geodesic normal coordinates of `q` about `p`, together with `r = d(p, q)`.
pub fn normal_coordinates(p: &Point, q: &Point) -> Result<(f64, f64, f64)> {
    same_space(p, q)?;
    Ok(normal_coordinates_unchecked(p, q))
}

pub(crate) fn normal_coordinates_unchecked(p: &Point, q: &Point) -> (f64, f64, f64) {
    match p.space {
        SpaceForm::Flat => {
            let x1 = q.coords[0] - p.coords[0];
            let x2 = q.coords[1] - p.coords[1];
            (x1, x2, x1.hypot(x2))
        }
        SpaceForm::Hyperbolic => {
            if p == q {
                return (0.0, 0.0, 0.0);
            }
            let d = distance_unchecked(p, q);
            let [p1, p2] = p.coords;
            let [q1, q2] = q.coords;
            let dot = p1 * q1 + p2 * q2;
            // <q, E_i>_L = q_i − p_i (q₀ − p·q / (1 + p₀))
            let shift = q.x0() - dot / (1.0 + p.x0());
            let scale = 1.0 / sinhc(d);
            let x1 = scale * (q1 - p1 * shift);
            let x2 = scale * (q2 - p2 * shift);
            (x1, x2, d)
        }
    }
}
