use std::collections::HashSet;
use std::f64::consts::TAU;

use crate::error::{Result, SteklovError};
use crate::geometry::{distance, Point, StarDomain};
use crate::radial::SpaceForm;

/// Boundary nodes at refinement level 0.
pub const BASE_BOUNDARY_NODES: usize = 64;

/// Triangulation of a star domain by a structured polar grid: one center
/// vertex, then `n_rings` rings of `n_theta` vertices at geodesic radii
/// `(j / n_rings)·ρ(θ_k)`. Vertex `1 + (j−1)·n_theta + k` sits on ring `j`
/// at angle `θ_k = 2πk/n_theta`; the last ring is the boundary.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub space: SpaceForm,
    pub center: Point,
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_loop: Vec<usize>,
    pub boundary_theta: Vec<f64>,
    pub level: u32,
    pub n_theta: usize,
    pub n_rings: usize,
    /// Longest edge, in geodesic length.
    pub h: f64,
}

/// Counts used for reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshStats {
    pub level: u32,
    pub vertices: usize,
    pub triangles: usize,
    pub boundary_nodes: usize,
    pub h: f64,
}

/// Builds the polar mesh of `domain` at the given refinement level:
/// `64·2^level` boundary nodes and `⌈n_θ · max ρ / 2π⌉` rings.
pub fn mesh_star_domain(domain: &StarDomain, level: u32) -> Result<Mesh> {
    if level > 12 {
        return Err(SteklovError::InvalidArgument {
            name: "level",
            value: level as f64,
            reason: "refinement level too large",
        });
    }
    let n_theta = BASE_BOUNDARY_NODES << level;
    let max_degree = n_theta / 8;
    if domain.degree() > max_degree {
        return Err(SteklovError::UnderResolved {
            degree: domain.degree(),
            max: max_degree,
            nodes: n_theta,
        });
    }
    let (_, rho_max) = domain.rho_range();
    let n_rings = ((n_theta as f64 * rho_max / TAU).ceil() as usize).max(2);

    let thetas: Vec<f64> = (0..n_theta).map(|k| TAU * k as f64 / n_theta as f64).collect();
    let rhos: Vec<f64> = thetas.iter().map(|&t| domain.rho(t)).collect();

    let mut vertices = Vec::with_capacity(1 + n_rings * n_theta);
    vertices.push(domain.center());
    for j in 1..=n_rings {
        let frac = j as f64 / n_rings as f64;
        for k in 0..n_theta {
            let r = if j == n_rings { rhos[k] } else { frac * rhos[k] };
            vertices.push(domain.point_at(thetas[k], r));
        }
    }

    let vid = |j: usize, k: usize| 1 + (j - 1) * n_theta + (k % n_theta);
    let mut triangles = Vec::with_capacity(n_theta * (2 * n_rings - 1));
    for k in 0..n_theta {
        triangles.push([0, vid(1, k), vid(1, k + 1)]);
    }
    for j in 1..n_rings {
        for k in 0..n_theta {
            let (a, b, c, d) = (vid(j, k), vid(j + 1, k), vid(j + 1, k + 1), vid(j, k + 1));
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }

    let boundary_loop: Vec<usize> = (0..n_theta).map(|k| vid(n_rings, k)).collect();

    let mut mesh = Mesh {
        space: domain.space(),
        center: domain.center(),
        vertices,
        triangles,
        boundary_loop,
        boundary_theta: thetas,
        level,
        n_theta,
        n_rings,
        h: 0.0,
    };
    mesh.h = mesh
        .edges()
        .iter()
        .map(|&(a, b)| distance(&mesh.vertices[a], &mesh.vertices[b]).unwrap_or(f64::NAN))
        .fold(0.0, f64::max);
    mesh.validate()?;
    Ok(mesh)
}

impl Mesh {
    /// Planar chart coordinates: Cartesian (flat) or Poincaré disk
    /// (hyperbolic). Orientation is preserved in both.
    pub fn chart_coords(&self) -> Vec<[f64; 2]> {
        self.vertices.iter().map(|p| p.to_poincare()).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut set = HashSet::new();
        for t in &self.triangles {
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                set.insert((a.min(b), a.max(b)));
            }
        }
        let mut edges: Vec<_> = set.into_iter().collect();
        edges.sort_unstable();
        edges
    }

    /// `V − E + F`; 1 for a disk.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges().len() as i64 + self.triangles.len() as i64
    }

    pub fn is_boundary(&self) -> Vec<bool> {
        let mut flags = vec![false; self.vertices.len()];
        for &b in &self.boundary_loop {
            flags[b] = true;
        }
        flags
    }

    pub fn interior_vertices(&self) -> Vec<usize> {
        let flags = self.is_boundary();
        (0..self.vertices.len()).filter(|&i| !flags[i]).collect()
    }

    pub fn stats(&self) -> MeshStats {
        MeshStats {
            level: self.level,
            vertices: self.vertices.len(),
            triangles: self.triangles.len(),
            boundary_nodes: self.boundary_loop.len(),
            h: self.h,
        }
    }

    /// Signed chart areas of all triangles.
    pub fn chart_areas(&self) -> Vec<f64> {
        let z = self.chart_coords();
        self.triangles
            .iter()
            .map(|t| {
                let (a, b, c) = (z[t[0]], z[t[1]], z[t[2]]);
                0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
            })
            .collect()
    }

    /// Checks orientation, degeneracy, and that the boundary edges (edges
    /// used by exactly one triangle) form the closed loop `boundary_loop`.
    pub fn validate(&self) -> Result<()> {
        let areas = self.chart_areas();
        let total: f64 = areas.iter().sum();
        for (i, &a) in areas.iter().enumerate() {
            if !(a > 1e-14 * total) {
                return Err(SteklovError::DegenerateMesh(format!(
                    "triangle {i} has chart area {a:.3e} (total {total:.3e})"
                )));
            }
        }
        let mut count = std::collections::HashMap::new();
        for t in &self.triangles {
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_insert(0usize) += 1;
            }
        }
        let mut boundary_edges: HashSet<(usize, usize)> =
            count.into_iter().filter(|&(_, c)| c == 1).map(|(e, _)| e).collect();
        let n = self.boundary_loop.len();
        for k in 0..n {
            let (a, b) = (self.boundary_loop[k], self.boundary_loop[(k + 1) % n]);
            if !boundary_edges.remove(&(a.min(b), a.max(b))) {
                return Err(SteklovError::DegenerateMesh(format!(
                    "boundary loop edge ({a}, {b}) is not a boundary edge"
                )));
            }
        }
        if !boundary_edges.is_empty() {
            return Err(SteklovError::DegenerateMesh(format!(
                "{} boundary edges are not on the boundary loop",
                boundary_edges.len()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_disk() -> StarDomain {
        StarDomain::disk(SpaceForm::Flat, Point::origin(SpaceForm::Flat), 1.0).unwrap()
    }

    #[test]
    fn level_zero_disk() {
        let m = mesh_star_domain(&unit_disk(), 0).unwrap();
        assert_eq!(m.boundary_loop.len(), 64);
        assert_eq!(m.n_rings, 11);
        assert_eq!(m.euler_characteristic(), 1);
        assert_eq!(m.vertices.len(), 1 + 11 * 64);
    }

    #[test]
    fn under_resolved_boundary_rejected() {
        let o = Point::origin(SpaceForm::Flat);
        let d = StarDomain::perturbed_disk(SpaceForm::Flat, o, 1.0, 0.1, 9).unwrap();
        assert!(matches!(
            mesh_star_domain(&d, 0),
            Err(SteklovError::UnderResolved { degree: 9, max: 8, .. })
        ));
        assert!(mesh_star_domain(&d, 1).is_ok());
    }

    #[test]
    fn hyperbolic_mesh_is_valid() {
        let c = Point::new(SpaceForm::Hyperbolic, 0.4, -0.2);
        let d = StarDomain::perturbed_disk(SpaceForm::Hyperbolic, c, 1.0, 0.3, 3).unwrap();
        let m = mesh_star_domain(&d, 1).unwrap();
        assert_eq!(m.euler_characteristic(), 1);
        assert!(m.h > 0.0);
    }
}
