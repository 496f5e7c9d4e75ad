use crate::error::{Result, SteklovError};
use crate::geometry::{distance_unchecked, exp_map, normal_coordinates_unchecked, BoundaryQuadrature, Point, StarDomain, TangentVector};
use crate::radial::RadialProfile;

const MAX_ITERATIONS: usize = 200;
/// Accepted normalized moment residual.
pub const MOMENT_TOLERANCE: f64 = 1e-10;
const RESTARTS: usize = 8;

/// A point at which the `g`-weighted boundary moment vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterOfMass {
    pub point: Point,
    /// `∫_{∂Ω} g(r)·xᵢ/r dA` at `point`.
    pub residual: [f64; 2],
    /// `∫_{∂Ω} g(r) dA`, the scale the residual is measured against.
    pub scale: f64,
    pub iterations: usize,
    /// A second root reached from a perturbed starting point, if any.
    pub alternate_root: Option<Point>,
    /// Whether `point` lies within `max ρ` of the boundary centroid.
    pub inside_hull: bool,
}

impl CenterOfMass {
    pub fn normalized_residual(&self) -> f64 {
        self.residual[0].hypot(self.residual[1]) / self.scale
    }
}

/// Moment vector `∫ g(r)·X/r dA` in normal coordinates at `p`, and `∫ g dA`.
pub fn boundary_moment(profile: &RadialProfile, quad: &BoundaryQuadrature, p: &Point) -> ([f64; 2], f64) {
    let mut m = [0.0; 2];
    let mut scale = 0.0;
    for node in &quad.nodes {
        let (x1, x2, r) = normal_coordinates_unchecked(p, &node.point);
        let w = node.weight * profile.g_over_r(r);
        m[0] += w * x1;
        m[1] += w * x2;
        scale += w * r;
    }
    (m, scale)
}

/// Riemannian mean of the boundary quadrature nodes, by fixed-point
/// averaging of log maps.
pub fn boundary_centroid(domain: &StarDomain, quad: &BoundaryQuadrature) -> Point {
    let diameter = 2.0 * domain.rho_range().1;
    let mut c = domain.center();
    for _ in 0..100 {
        let mut v = [0.0; 2];
        for node in &quad.nodes {
            let (x1, x2, _) = normal_coordinates_unchecked(&c, &node.point);
            v[0] += node.weight * x1;
            v[1] += node.weight * x2;
        }
        v[0] /= quad.total_length;
        v[1] /= quad.total_length;
        c = exp_map(&TangentVector::new(c, v));
        if v[0].hypot(v[1]) < 1e-15 * diameter {
            break;
        }
    }
    c
}

fn check_profile(domain: &StarDomain, profile: &RadialProfile) -> Result<()> {
    if profile.space() != domain.space() {
        return Err(SteklovError::SpaceMismatch);
    }
    if profile.dimension() != 2 {
        return Err(SteklovError::InvalidArgument {
            name: "n",
            value: profile.dimension() as f64,
            reason: "star domains are two-dimensional",
        });
    }
    Ok(())
}

/// Damped Newton iteration on the moment map with a forward-difference
/// Jacobian. Returns the root and the iteration count.
fn newton(profile: &RadialProfile, quad: &BoundaryQuadrature, start: Point, diameter: f64) -> Result<(Point, usize)> {
    let step = 1e-6 * diameter;
    let mut p = start;
    let (mut m, mut scale) = boundary_moment(profile, quad, &p);
    for it in 0..MAX_ITERATIONS {
        let norm = m[0].hypot(m[1]);
        if norm <= 1e-14 * scale {
            return Ok((p, it));
        }
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let mut e = [0.0; 2];
            e[j] = step;
            let (mj, _) = boundary_moment(profile, quad, &exp_map(&TangentVector::new(p, e)));
            jac[0][j] = (mj[0] - m[0]) / step;
            jac[1][j] = (mj[1] - m[1]) / step;
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if !(det.abs() > 0.0) || !det.is_finite() {
            return Err(SteklovError::NoConvergence { what: "center of mass", iterations: it, residual: norm / scale });
        }
        let v = [
            -(jac[1][1] * m[0] - jac[0][1] * m[1]) / det,
            -(-jac[1][0] * m[0] + jac[0][0] * m[1]) / det,
        ];
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let q = exp_map(&TangentVector::new(p, [lambda * v[0], lambda * v[1]]));
            let (mq, sq) = boundary_moment(profile, quad, &q);
            if mq[0].hypot(mq[1]) < (1.0 - 1e-4 * lambda) * norm {
                p = q;
                m = mq;
                scale = sq;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            // no further decrease possible: rounding floor reached
            if norm <= MOMENT_TOLERANCE * scale {
                return Ok((p, it));
            }
            return Err(SteklovError::NoConvergence { what: "center of mass", iterations: it, residual: norm / scale });
        }
    }
    let norm = m[0].hypot(m[1]);
    if norm <= MOMENT_TOLERANCE * scale {
        Ok((p, MAX_ITERATIONS))
    } else {
        Err(SteklovError::NoConvergence { what: "center of mass", iterations: MAX_ITERATIONS, residual: norm / scale })
    }
}

/// The center of mass of `∂Ω` with weight `G(t) = g(t)/t`: the point `p`
/// with `∫_{∂Ω} g(r)·xᵢ/r dA = 0` in normal coordinates at `p`.
pub fn center_of_mass(domain: &StarDomain, profile: &RadialProfile) -> Result<CenterOfMass> {
    check_profile(domain, profile)?;
    let quad = BoundaryQuadrature::new(domain);
    let (rho_min, rho_max) = domain.rho_range();
    let diameter = 2.0 * rho_max;
    let centroid = boundary_centroid(domain, &quad);
    let (point, iterations) = newton(profile, &quad, centroid, diameter)?;

    let mut alternate_root = None;
    for k in 0..RESTARTS {
        let (s, c) = (std::f64::consts::TAU * k as f64 / RESTARTS as f64).sin_cos();
        let start = exp_map(&TangentVector::new(centroid, [0.25 * rho_min * c, 0.25 * rho_min * s]));
        if let Ok((q, _)) = newton(profile, &quad, start, diameter) {
            if distance_unchecked(&q, &point) > 1e-6 * diameter {
                alternate_root = Some(q);
                break;
            }
        }
    }

    let (residual, scale) = boundary_moment(profile, &quad, &point);
    Ok(CenterOfMass {
        point,
        residual,
        scale,
        iterations,
        alternate_root,
        inside_hull: distance_unchecked(&point, &centroid) < rho_max,
    })
}
