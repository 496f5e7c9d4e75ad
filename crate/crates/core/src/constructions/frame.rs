use crate::error::{Result, SteklovError};
use crate::geometry::{normal_coordinates_unchecked, BoundaryQuadrature, InteriorQuadrature, Point, StarDomain};
use crate::radial::RadialProfile;

/// Rotated normal coordinates at the center of mass. The axes are
/// `x̃₁ = cos α·x₁ + sin α·x₂` and `x̃₂ = −sin α·x₁ + cos α·x₂`, with `α` chosen
/// so that `g(r)·x̃₂/r` is boundary-orthogonal to `u₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunctionFrame {
    pub center: Point,
    /// `α ∈ [0, π)`.
    pub angle: f64,
    /// `∫ g·x̃₁/r dA`, `∫ g·x̃₂/r dA` and `∫ g·x̃₂/r·u₁ dA`.
    pub orthogonality_residuals: [f64; 3],
    /// `∫ g·X/r·u₁ dA` vanished for every direction; `α = 0` was taken.
    pub degenerate: bool,
    /// Cauchy–Schwarz bound `‖g‖·‖u₁‖` on the rotation constraint.
    pub scale: f64,
}

impl TestFunctionFrame {
    /// Rotated coordinates `(x̃₁, x̃₂)`.
    pub fn axes(&self, x1: f64, x2: f64) -> [f64; 2] {
        let (s, c) = self.angle.sin_cos();
        [c * x1 + s * x2, -s * x1 + c * x2]
    }
}

/// `h(α) = ∫_{∂Ω} g(r)·(−sin α·x₁ + cos α·x₂)/r·u₁ dA`, by direct quadrature.
/// `u1` is a function of the polar angle about the domain center.
pub fn rotation_constraint<F: Fn(f64) -> f64>(
    domain: &StarDomain,
    profile: &RadialProfile,
    p: &Point,
    u1: F,
    angle: f64,
) -> f64 {
    let quad = BoundaryQuadrature::new(domain);
    let (s, c) = angle.sin_cos();
    quad.integrate(|node| {
        let (x1, x2, r) = normal_coordinates_unchecked(p, &node.point);
        profile.g_over_r(r) * (-s * x1 + c * x2) * u1(node.theta)
    })
}

/// Chooses the rotation making the second test function orthogonal to `u₁`.
///
/// `h(α) = B cos α − A sin α` with `A = ∫ g·x₁/r·u₁`, `B = ∫ g·x₂/r·u₁`, so
/// `h(α + π) = −h(α)` and the root in `[0, π)` is `atan2(B, A)` reduced
/// mod π.
pub fn align_rotation<F: Fn(f64) -> f64>(
    domain: &StarDomain,
    profile: &RadialProfile,
    p: &Point,
    u1: F,
) -> Result<TestFunctionFrame> {
    if p.space() != domain.space() || profile.space() != domain.space() {
        return Err(SteklovError::SpaceMismatch);
    }
    let quad = BoundaryQuadrature::new(domain);
    let mut a = 0.0;
    let mut b = 0.0;
    let mut g2 = 0.0;
    let mut u2 = 0.0;
    let mut m = [0.0; 2];
    let mut samples = Vec::with_capacity(quad.len());
    for node in &quad.nodes {
        let (x1, x2, r) = normal_coordinates_unchecked(p, &node.point);
        let w = node.weight;
        let gr = profile.g_over_r(r);
        let u = u1(node.theta);
        a += w * gr * x1 * u;
        b += w * gr * x2 * u;
        m[0] += w * gr * x1;
        m[1] += w * gr * x2;
        g2 += w * (gr * r).powi(2);
        u2 += w * u * u;
        samples.push((w, gr, x1, x2, u));
    }
    let scale = (g2 * u2).sqrt();
    let degenerate = a.hypot(b) < 1e-10 * scale;
    let angle = if degenerate {
        0.0
    } else {
        let t = b.atan2(a).rem_euclid(std::f64::consts::PI);
        if t >= std::f64::consts::PI { 0.0 } else { t }
    };
    let (s, c) = angle.sin_cos();
    let constraint: f64 = samples.iter().map(|&(w, gr, x1, x2, u)| w * gr * (-s * x1 + c * x2) * u).sum();
    Ok(TestFunctionFrame {
        center: *p,
        angle,
        orthogonality_residuals: [c * m[0] + s * m[1], -s * m[0] + c * m[1], constraint],
        degenerate,
        scale,
    })
}

/// `‖∇(g(r)·xᵢ/r)‖² = g′²·xᵢ²/r² + (g²/sin_k² r)·(1 − xᵢ²/r²)`.
pub fn grad_norm_sq_testfn(profile: &RadialProfile, r: f64, xi: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(SteklovError::InvalidArgument { name: "r", value: r, reason: "must be positive and finite" });
    }
    if !xi.is_finite() || xi.abs() > r * (1.0 + 1e-12) {
        return Err(SteklovError::InvalidArgument { name: "xi", value: xi, reason: "|xi| must not exceed r" });
    }
    Ok(grad_norm_sq_unchecked(profile, r, (xi / r).powi(2).min(1.0)))
}

/// Same as [`grad_norm_sq_testfn`] in terms of `c² = xᵢ²/r²`; at `r = 0`
/// both coefficients equal `1/n²`.
fn grad_norm_sq_unchecked(profile: &RadialProfile, r: f64, c2: f64) -> f64 {
    if r <= 0.0 {
        let n = profile.dimension() as f64;
        return 1.0 / (n * n);
    }
    let gp = profile.g_prime_unchecked(r);
    let q = profile.g_over_sin_unchecked(r);
    gp * gp * c2 + q * q * (1.0 - c2)
}

/// Energies, boundary norms and Rayleigh quotients of the two test
/// functions `g(r)·x̃ᵢ/r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunctionQuotients {
    /// `∫_Ω ‖∇φᵢ‖² dV`.
    pub energies: [f64; 2],
    /// `∫_{∂Ω} φᵢ² dA`.
    pub boundary_norms: [f64; 2],
    pub quotients: [f64; 2],
}

pub fn rayleigh_testfn(
    domain: &StarDomain,
    frame: &TestFunctionFrame,
    profile: &RadialProfile,
) -> Result<TestFunctionQuotients> {
    if frame.center.space() != domain.space() || profile.space() != domain.space() {
        return Err(SteklovError::SpaceMismatch);
    }
    let p = &frame.center;
    let quad = BoundaryQuadrature::new(domain);
    let mut boundary_norms = [0.0; 2];
    for node in &quad.nodes {
        let (x1, x2, r) = normal_coordinates_unchecked(p, &node.point);
        let gr = profile.g_over_r(r);
        let x = frame.axes(x1, x2);
        for i in 0..2 {
            boundary_norms[i] += node.weight * (gr * x[i]).powi(2);
        }
    }
    let interior = InteriorQuadrature::new(domain);
    let mut energies = [0.0; 2];
    for node in &interior.nodes {
        let (x1, x2, r) = normal_coordinates_unchecked(p, &node.point);
        let x = frame.axes(x1, x2);
        for i in 0..2 {
            let c2 = if r > 0.0 { (x[i] / r).powi(2).min(1.0) } else { 0.5 };
            energies[i] += node.weight * grad_norm_sq_unchecked(profile, r, c2);
        }
    }
    for &d in &boundary_norms {
        if !(d > 1e-300) {
            return Err(SteklovError::DegenerateBoundary("test function vanishes on the boundary"));
        }
    }
    Ok(TestFunctionQuotients {
        energies,
        boundary_norms,
        quotients: [energies[0] / boundary_norms[0], energies[1] / boundary_norms[1]],
    })
}
