use std::f64::consts::TAU;

use super::{exp_map, Isometry, Point, TangentVector};
use crate::error::{require_positive, Result, SteklovError};
use crate::quadrature::GaussLegendre;
use crate::radial::SpaceForm;

/// Minimum number of boundary quadrature nodes.
pub const MIN_BOUNDARY_NODES: usize = 256;
/// Boundary nodes per unit of Fourier degree.
pub const NODES_PER_DEGREE: usize = 8;
/// Default number of Gauss–Legendre points along each ray.
pub const DEFAULT_RADIAL_POINTS: usize = 32;

/// A domain star-shaped about `center`: in geodesic polar coordinates about
/// the center it is `{ (θ, r) : r < ρ(θ) }`, with
/// `ρ(θ) = a₀ + Σ_k (a_k cos kθ + b_k sin kθ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarDomain {
    space: SpaceForm,
    center: Point,
    mean: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl StarDomain {
    pub fn new(space: SpaceForm, center: Point, mean: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if center.space() != space {
            return Err(SteklovError::SpaceMismatch);
        }
        let degree = cos.len().max(sin.len());
        let mut cos = cos;
        let mut sin = sin;
        cos.resize(degree, 0.0);
        sin.resize(degree, 0.0);
        if !mean.is_finite() || cos.iter().chain(&sin).any(|c| !c.is_finite()) {
            return Err(SteklovError::InvalidDomain("non-finite Fourier coefficient".into()));
        }
        let mut domain = Self { space, center, mean, cos, sin };
        domain.trim();
        let (lo, _) = domain.rho_range();
        if !(lo > 0.0) {
            return Err(SteklovError::InvalidDomain(format!(
                "boundary radius must stay positive (min ρ = {lo:.3e})"
            )));
        }
        Ok(domain)
    }

    pub fn disk(space: SpaceForm, center: Point, radius: f64) -> Result<Self> {
        require_positive("R", radius)?;
        Self::new(space, center, radius, vec![], vec![])
    }

    /// `ρ(θ) = R₀ (1 + ε cos mθ)`.
    pub fn perturbed_disk(space: SpaceForm, center: Point, radius: f64, epsilon: f64, m: usize) -> Result<Self> {
        require_positive("R", radius)?;
        if m == 0 {
            return Err(SteklovError::InvalidArgument {
                name: "m",
                value: 0.0,
                reason: "perturbation frequency must be at least 1",
            });
        }
        let mut cos = vec![0.0; m];
        cos[m - 1] = radius * epsilon;
        Self::new(space, center, radius, cos, vec![])
    }

    /// Degree-`degree` trigonometric truncation of the polar radius of the
    /// ellipse with semi-axes `a` (along the first frame axis) and `b`.
    pub fn ellipse(space: SpaceForm, center: Point, a: f64, b: f64, degree: usize) -> Result<Self> {
        require_positive("a", a)?;
        require_positive("b", b)?;
        Self::from_polar_function(space, center, degree, |t| {
            let (s, c) = t.sin_cos();
            a * b / ((b * c).powi(2) + (a * s).powi(2)).sqrt()
        })
    }

    /// Fourier truncation of an arbitrary positive polar radius function,
    /// coefficients computed by the trapezoid rule on a fine uniform grid.
    pub fn from_polar_function<F: Fn(f64) -> f64>(
        space: SpaceForm,
        center: Point,
        degree: usize,
        rho: F,
    ) -> Result<Self> {
        let samples = (16 * degree).max(1024);
        let values: Vec<f64> = (0..samples).map(|j| rho(TAU * j as f64 / samples as f64)).collect();
        let mean = values.iter().sum::<f64>() / samples as f64;
        let mut cos = vec![0.0; degree];
        let mut sin = vec![0.0; degree];
        for k in 1..=degree {
            let (mut ck, mut sk) = (0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                let (s, c) = (TAU * (k * j % samples) as f64 / samples as f64).sin_cos();
                ck += v * c;
                sk += v * s;
            }
            cos[k - 1] = 2.0 * ck / samples as f64;
            sin[k - 1] = 2.0 * sk / samples as f64;
        }
        for c in cos.iter_mut().chain(sin.iter_mut()) {
            if c.abs() < 1e-15 * mean.abs() {
                *c = 0.0;
            }
        }
        Self::new(space, center, mean, cos, sin)
    }

    fn trim(&mut self) {
        while let (Some(&c), Some(&s)) = (self.cos.last(), self.sin.last()) {
            if c == 0.0 && s == 0.0 {
                self.cos.pop();
                self.sin.pop();
            } else {
                break;
            }
        }
    }

    pub fn space(&self) -> SpaceForm {
        self.space
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn mean_radius(&self) -> f64 {
        self.mean
    }

    pub fn cos_coefficients(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coefficients(&self) -> &[f64] {
        &self.sin
    }

    /// Highest Fourier mode with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.cos.len()
    }

    pub fn rho(&self, theta: f64) -> f64 {
        let mut v = self.mean;
        for (k, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let (s, c) = ((k + 1) as f64 * theta).sin_cos();
            v += a * c + b * s;
        }
        v
    }

    pub fn rho_prime(&self, theta: f64) -> f64 {
        let mut v = 0.0;
        for (k, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let kf = (k + 1) as f64;
            let (s, c) = (kf * theta).sin_cos();
            v += kf * (b * c - a * s);
        }
        v
    }

    /// Minimum and maximum of ρ sampled on a grid fine enough for the degree.
    pub fn rho_range(&self) -> (f64, f64) {
        let samples = 64 * (self.degree() + 1);
        (0..samples)
            .map(|j| self.rho(TAU * j as f64 / samples as f64))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }

    /// Point at geodesic polar coordinates `(θ, r)` about the center.
    pub fn point_at(&self, theta: f64, r: f64) -> Point {
        let (s, c) = theta.sin_cos();
        exp_map(&TangentVector::new(self.center, [r * c, r * s]))
    }

    pub fn boundary_point(&self, theta: f64) -> Point {
        self.point_at(theta, self.rho(theta))
    }

    /// Same shape with every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        require_positive("factor", factor)?;
        Self::new(
            self.space,
            self.center,
            self.mean * factor,
            self.cos.iter().map(|c| c * factor).collect(),
            self.sin.iter().map(|c| c * factor).collect(),
        )
    }

    /// `ρ(θ − angle)`: the domain rotated by `angle` about its center.
    pub fn rotated(&self, angle: f64) -> Self {
        let mut cos = self.cos.clone();
        let mut sin = self.sin.clone();
        for k in 0..cos.len() {
            let (s, c) = ((k + 1) as f64 * angle).sin_cos();
            let (a, b) = (self.cos[k], self.sin[k]);
            cos[k] = a * c - b * s;
            sin[k] = a * s + b * c;
        }
        Self {
            space: self.space,
            center: self.center,
            mean: self.mean,
            cos,
            sin,
        }
    }

    /// Image of the domain under an isometry.
    pub fn transformed(&self, iso: &Isometry) -> Result<Self> {
        if iso.space() != self.space {
            return Err(SteklovError::SpaceMismatch);
        }
        let beta = iso.frame_rotation_at(&self.center);
        let mut out = self.rotated(beta);
        out.center = iso.apply(&self.center);
        Ok(out)
    }

    /// Volume by the trapezoid rule in θ on the default boundary grid.
    pub fn volume(&self) -> f64 {
        let nodes = default_boundary_nodes(self.degree());
        let dt = TAU / nodes as f64;
        (0..nodes)
            .map(|j| {
                let rho = self.rho(dt * j as f64);
                match self.space {
                    SpaceForm::Flat => 0.5 * rho * rho,
                    SpaceForm::Hyperbolic => self.space.cos_k_minus_one(rho),
                }
            })
            .sum::<f64>()
            * dt
    }

    /// Rescales ρ so that the volume equals `target`.
    pub fn normalized_to_volume(&self, target: f64) -> Result<Self> {
        require_positive("volume", target)?;
        let v0 = self.volume();
        let mut factor = (target / v0).sqrt();
        if self.space == SpaceForm::Hyperbolic {
            // volume is increasing in the scale factor; bracket then bisect
            let vol = |f: f64| self.scaled(f).map(|d| d.volume() - target);
            let (mut lo, mut hi) = (factor, factor);
            while vol(lo)? > 0.0 {
                lo *= 0.5;
            }
            while vol(hi)? < 0.0 {
                hi *= 2.0;
            }
            for _ in 0..200 {
                factor = 0.5 * (lo + hi);
                if vol(factor)? < 0.0 {
                    lo = factor;
                } else {
                    hi = factor;
                }
                if hi - lo <= 2.0 * f64::EPSILON * hi {
                    break;
                }
            }
            factor = 0.5 * (lo + hi);
        }
        self.scaled(factor)
    }

    pub fn describe(&self) -> String {
        let mut s = format!("{} star domain, rho = {:.6}", self.space, self.mean);
        for (k, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            if *a != 0.0 {
                s.push_str(&format!(" {:+.6}cos{}t", a, k + 1));
            }
            if *b != 0.0 {
                s.push_str(&format!(" {:+.6}sin{}t", b, k + 1));
            }
        }
        s
    }
}

pub fn default_boundary_nodes(degree: usize) -> usize {
    (NODES_PER_DEGREE * degree).max(MIN_BOUNDARY_NODES)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryNode {
    pub theta: f64,
    pub rho: f64,
    pub point: Point,
    pub weight: f64,
}

/// Uniform-θ trapezoid rule on the boundary with arclength weights
/// `√(ρ'² + sin_k²ρ) dθ`.
#[derive(Debug, Clone)]
pub struct BoundaryQuadrature {
    pub nodes: Vec<BoundaryNode>,
    pub total_length: f64,
}

impl BoundaryQuadrature {
    pub fn new(domain: &StarDomain) -> Self {
        Self::with_nodes(domain, default_boundary_nodes(domain.degree()))
    }

    pub fn with_nodes(domain: &StarDomain, count: usize) -> Self {
        let dt = TAU / count as f64;
        let nodes: Vec<BoundaryNode> = (0..count)
            .map(|j| {
                let theta = dt * j as f64;
                let rho = domain.rho(theta);
                let drho = domain.rho_prime(theta);
                let s = domain.space.sin_k(rho);
                BoundaryNode {
                    theta,
                    rho,
                    point: domain.point_at(theta, rho),
                    weight: dt * drho.hypot(s),
                }
            })
            .collect();
        let total_length = nodes.iter().map(|n| n.weight).sum();
        Self { nodes, total_length }
    }

    pub fn integrate<F: FnMut(&BoundaryNode) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().map(|n| f(n) * n.weight).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `Σ f(node)·weight` over the boundary quadrature of `domain`.
pub fn boundary_integral<F: FnMut(&BoundaryNode) -> f64>(quad: &BoundaryQuadrature, f: F) -> f64 {
    quad.integrate(f)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorNode {
    pub theta: f64,
    pub r: f64,
    pub point: Point,
    pub weight: f64,
}

/// Polar-grid rule on the domain: trapezoid in θ, Gauss–Legendre in the
/// geodesic radius, volume element `sin_k(r) dr dθ`.
#[derive(Debug, Clone)]
pub struct InteriorQuadrature {
    pub nodes: Vec<InteriorNode>,
}

impl InteriorQuadrature {
    pub fn new(domain: &StarDomain) -> Self {
        Self::with_resolution(domain, default_boundary_nodes(domain.degree()), DEFAULT_RADIAL_POINTS)
    }

    pub fn with_resolution(domain: &StarDomain, angular: usize, radial: usize) -> Self {
        let rule = GaussLegendre::new(radial);
        let dt = TAU / angular as f64;
        let mut nodes = Vec::with_capacity(angular * radial);
        for j in 0..angular {
            let theta = dt * j as f64;
            let rho = domain.rho(theta);
            for (r, w) in rule.on_interval(0.0, rho) {
                nodes.push(InteriorNode {
                    theta,
                    r,
                    point: domain.point_at(theta, r),
                    weight: dt * w * domain.space.sin_k(r),
                });
            }
        }
        Self { nodes }
    }

    pub fn integrate<F: FnMut(&InteriorNode) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().map(|n| f(n) * n.weight).sum()
    }
}

/// Volume of the domain.
pub fn domain_volume(domain: &StarDomain) -> f64 {
    domain.volume()
}

impl std::fmt::Display for StarDomain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.describe())
    }
}
