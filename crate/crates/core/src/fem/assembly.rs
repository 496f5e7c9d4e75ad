//! Piecewise-linear stiffness and boundary mass matrices.
//!
//! In two dimensions the Dirichlet energy is conformally invariant, so on
//! ℍ² the stiffness matrix is the flat P1 stiffness of the mesh drawn in
//! Poincaré disk coordinates. Only the boundary mass sees the metric, through
//! the conformal factor `2/(1−|z|²)`.

use crate::error::{Result, SteklovError};
use crate::geometry::normal_coordinates;
use crate::radial::SpaceForm;

use super::mesh::Mesh;
use super::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AssemblyMethod {
    /// Flat stiffness in the conformal chart, weighted boundary mass.
    #[default]
    Conformal,
    /// Metric integrated directly in geodesic normal coordinates about the
    /// mesh center.
    GeodesicPolar,
}

/// Stiffness `K` and boundary mass `M_b`, both indexed by mesh vertex.
#[derive(Debug, Clone)]
pub struct SteklovSystem {
    pub space: SpaceForm,
    pub stiffness: CsrMatrix,
    pub boundary_mass: CsrMatrix,
    /// Boundary vertices in loop order.
    pub boundary: Vec<usize>,
    pub interior: Vec<usize>,
    /// Polar angle of each boundary vertex about the domain center.
    pub boundary_theta: Vec<f64>,
    pub mesh_h: f64,
    pub level: u32,
}

// degree-5 seven-point triangle rule (barycentric coordinates, weights sum to 1)
const TRI_RULE: [([f64; 3], f64); 7] = [
    ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 0.225),
    ([0.059_715_871_789_770, 0.470_142_064_105_115, 0.470_142_064_105_115], 0.132_394_152_788_506),
    ([0.470_142_064_105_115, 0.059_715_871_789_770, 0.470_142_064_105_115], 0.132_394_152_788_506),
    ([0.470_142_064_105_115, 0.470_142_064_105_115, 0.059_715_871_789_770], 0.132_394_152_788_506),
    ([0.797_426_985_353_087, 0.101_286_507_323_456, 0.101_286_507_323_456], 0.125_939_180_544_827),
    ([0.101_286_507_323_456, 0.797_426_985_353_087, 0.101_286_507_323_456], 0.125_939_180_544_827),
    ([0.101_286_507_323_456, 0.101_286_507_323_456, 0.797_426_985_353_087], 0.125_939_180_544_827),
];

/// Assembles `K` and `M_b` with the conformal method.
pub fn assemble(mesh: &Mesh) -> Result<SteklovSystem> {
    assemble_with(mesh, AssemblyMethod::Conformal)
}

pub fn assemble_with(mesh: &Mesh, method: AssemblyMethod) -> Result<SteklovSystem> {
    let coords: Vec<[f64; 2]> = match method {
        AssemblyMethod::Conformal => mesh.chart_coords(),
        AssemblyMethod::GeodesicPolar => mesh
            .vertices
            .iter()
            .map(|v| normal_coordinates(&mesh.center, v).map(|(x, y, _)| [x, y]))
            .collect::<Result<_>>()?,
    };
    let n = mesh.vertices.len();
    let space = mesh.space;

    let mut k_trip = Vec::with_capacity(9 * mesh.triangles.len());
    for (t_idx, tri) in mesh.triangles.iter().enumerate() {
        let p = [coords[tri[0]], coords[tri[1]], coords[tri[2]]];
        let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]);
        let area = 0.5 * det;
        if !(area > 0.0) || !area.is_finite() {
            return Err(SteklovError::DegenerateMesh(format!(
                "triangle {t_idx} has non-positive area {area:.3e}"
            )));
        }
        // gradients of the barycentric basis functions
        let grads: [[f64; 2]; 3] = std::array::from_fn(|i| {
            let b = p[(i + 1) % 3];
            let c = p[(i + 2) % 3];
            [(b[1] - c[1]) / det, (c[0] - b[0]) / det]
        });
        let tensor = match (method, space) {
            (AssemblyMethod::Conformal, _) | (_, SpaceForm::Flat) => [[area, 0.0], [0.0, area]],
            (AssemblyMethod::GeodesicPolar, SpaceForm::Hyperbolic) => {
                let mut acc = [[0.0; 2]; 2];
                for (bary, w) in TRI_RULE {
                    let y = [
                        bary[0] * p[0][0] + bary[1] * p[1][0] + bary[2] * p[2][0],
                        bary[0] * p[0][1] + bary[1] * p[1][1] + bary[2] * p[2][1],
                    ];
                    let m = inverse_metric_density(y);
                    for a in 0..2 {
                        for b in 0..2 {
                            acc[a][b] += w * area * m[a][b];
                        }
                    }
                }
                acc
            }
        };
        for i in 0..3 {
            for j in i..3 {
                let gi = grads[i];
                let gj = grads[j];
                let v = gi[0] * (tensor[0][0] * gj[0] + tensor[0][1] * gj[1])
                    + gi[1] * (tensor[1][0] * gj[0] + tensor[1][1] * gj[1]);
                if !v.is_finite() {
                    return Err(SteklovError::DegenerateMesh(format!("non-finite stiffness in triangle {t_idx}")));
                }
                k_trip.push((tri[i], tri[j], v));
                if i != j {
                    k_trip.push((tri[j], tri[i], v));
                }
            }
        }
    }

    let gauss2 = [0.5 - 0.5 / 3f64.sqrt(), 0.5 + 0.5 / 3f64.sqrt()];
    let gauss3 = [
        (0.5 - 0.5 * (0.6f64).sqrt(), 5.0 / 18.0),
        (0.5, 8.0 / 18.0),
        (0.5 + 0.5 * (0.6f64).sqrt(), 5.0 / 18.0),
    ];
    let nb = mesh.boundary_loop.len();
    let mut m_trip = Vec::with_capacity(4 * nb);
    for e in 0..nb {
        let (ia, ib) = (mesh.boundary_loop[e], mesh.boundary_loop[(e + 1) % nb]);
        let (za, zb) = (coords[ia], coords[ib]);
        let d = [zb[0] - za[0], zb[1] - za[1]];
        let mut local = [[0.0; 2]; 2];
        match (method, space) {
            (_, SpaceForm::Flat) | (AssemblyMethod::Conformal, SpaceForm::Hyperbolic) => {
                let len = d[0].hypot(d[1]);
                for &t in &gauss2 {
                    let z = [za[0] + t * d[0], za[1] + t * d[1]];
                    let w = match space {
                        SpaceForm::Flat => 1.0,
                        SpaceForm::Hyperbolic => 2.0 / (1.0 - z[0] * z[0] - z[1] * z[1]),
                    };
                    let phi = [1.0 - t, t];
                    for a in 0..2 {
                        for b in a..2 {
                            local[a][b] += 0.5 * len * w * phi[a] * phi[b];
                        }
                    }
                }
            }
            (AssemblyMethod::GeodesicPolar, SpaceForm::Hyperbolic) => {
                for &(t, wq) in &gauss3 {
                    let y = [za[0] + t * d[0], za[1] + t * d[1]];
                    let speed = metric_norm(y, d);
                    let phi = [1.0 - t, t];
                    for a in 0..2 {
                        for b in a..2 {
                            local[a][b] += wq * speed * phi[a] * phi[b];
                        }
                    }
                }
            }
        }
        local[1][0] = local[0][1];
        let idx = [ia, ib];
        for a in 0..2 {
            for b in 0..2 {
                m_trip.push((idx[a], idx[b], local[a][b]));
            }
        }
    }

    Ok(SteklovSystem {
        space,
        stiffness: CsrMatrix::from_triplets(n, k_trip),
        boundary_mass: CsrMatrix::from_triplets(n, m_trip),
        boundary: mesh.boundary_loop.clone(),
        interior: mesh.interior_vertices(),
        boundary_theta: mesh.boundary_theta.clone(),
        mesh_h: mesh.h,
        level: mesh.level,
    })
}

/// `√det G · G⁻¹` for the hyperbolic metric in normal coordinates:
/// `(s/r) ûûᵀ + (r/s)(I − ûûᵀ)` with `s = sinh r`.
fn inverse_metric_density(y: [f64; 2]) -> [[f64; 2]; 2] {
    let r = y[0].hypot(y[1]);
    if r < 1e-12 {
        return [[1.0, 0.0], [0.0, 1.0]];
    }
    let ratio = r.sinh() / r;
    let u = [y[0] / r, y[1] / r];
    let radial = ratio;
    let tangential = 1.0 / ratio;
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let uu = u[a] * u[b];
            let id = if a == b { 1.0 } else { 0.0 };
            radial * uu + tangential * (id - uu)
        })
    })
}

/// Metric length of the coordinate vector `d` at `y`:
/// `G = ûûᵀ + (sinh r / r)²(I − ûûᵀ)`.
fn metric_norm(y: [f64; 2], d: [f64; 2]) -> f64 {
    let r = y[0].hypot(y[1]);
    if r < 1e-12 {
        return d[0].hypot(d[1]);
    }
    let u = [y[0] / r, y[1] / r];
    let radial = u[0] * d[0] + u[1] * d[1];
    let tangential2 = (d[0] * d[0] + d[1] * d[1] - radial * radial).max(0.0);
    let ratio = r.sinh() / r;
    (radial * radial + ratio * ratio * tangential2).sqrt()
}

impl SteklovSystem {
    /// `1ᵀ M_b 1`: discrete perimeter.
    pub fn boundary_length(&self) -> f64 {
        let ones = vec![1.0; self.stiffness.dim()];
        self.boundary_mass.bilinear(&ones, &ones)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::mesh_star_domain;
    use crate::geometry::{Point, StarDomain};

    #[test]
    fn constants_in_kernel_and_perimeter() {
        let d = StarDomain::disk(SpaceForm::Flat, Point::origin(SpaceForm::Flat), 1.0).unwrap();
        let mesh = mesh_star_domain(&d, 1).unwrap();
        let sys = assemble(&mesh).unwrap();
        let ones = vec![1.0; mesh.vertices.len()];
        let k1 = sys.stiffness.mul_vec(&ones);
        let worst = k1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(worst < 1e-12 * sys.stiffness.max_abs());
        let len = sys.boundary_length();
        assert!((len - std::f64::consts::TAU).abs() < 1e-2);
        assert!(sys.stiffness.asymmetry() < 1e-12 * sys.stiffness.max_abs());
        assert!(sys.boundary_mass.asymmetry() == 0.0);
    }

    #[test]
    fn geodesic_polar_equals_conformal_on_flat_domains() {
        let d = StarDomain::perturbed_disk(SpaceForm::Flat, Point::new(SpaceForm::Flat, 0.5, 0.0), 1.0, 0.2, 2)
            .unwrap();
        let mesh = mesh_star_domain(&d, 0).unwrap();
        let a = assemble_with(&mesh, AssemblyMethod::Conformal).unwrap();
        let b = assemble_with(&mesh, AssemblyMethod::GeodesicPolar).unwrap();
        let ones = vec![1.0; mesh.vertices.len()];
        let x: Vec<f64> = (0..mesh.vertices.len()).map(|i| (i as f64 * 0.37).sin()).collect();
        let ea = a.stiffness.bilinear(&x, &x);
        let eb = b.stiffness.bilinear(&x, &x);
        assert!((ea - eb).abs() < 1e-10 * ea);
        assert!((a.boundary_length() - b.boundary_length()).abs() < 1e-12);
        assert!(b.stiffness.mul_vec(&ones).iter().all(|v| v.abs() < 1e-9));
    }
}
