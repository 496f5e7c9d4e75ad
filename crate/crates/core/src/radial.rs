//! Radial machinery on the space forms ℝⁿ and ℍⁿ (curvature −1).
//!
//! In geodesic polar coordinates about any point the metric is
//! `dr² + sin_k²(r)·g_{S^{n-1}}`, with `sin_k r = r` (flat) or `sinh r`
//! (hyperbolic). The first nonzero Steklov eigenfunctions of a geodesic ball
//! are `g(r)·xᵢ/r`, where
//!
//! ```text
//! g(r) = sin_k^{1-n}(r) ∫₀ʳ sin_k^{n-1}(t) dt
//! ```
//!
//! and the ball eigenvalue is `μ₁(B(R)) = g'(R)/g(R)` with multiplicity `n`.

use std::f64::consts::PI;

use crate::error::{require_dimension, require_positive, Result, SteklovError};
use crate::quadrature::integrate_adaptive;

/// Below this radius `g`, `g'` and `g/sin_k` use their leading-order
/// Taylor expansions; the neglected O(r⁵) term is below 1e-20 relative.
pub const SMALL_R: f64 = 1e-5;

/// Below this radius the hyperbolic `g` is evaluated from the power series
/// of `(sinh t / t)^m`; the reduction recurrence cancels badly near zero.
const SERIES_R: f64 = 1.0;
/// Above this radius `g'` is evaluated without the `1 − (n−1)·g·coth r`
/// cancellation.
const LARGE_R: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceForm {
    Flat,
    Hyperbolic,
}

impl SpaceForm {
    pub fn sin_k(self, r: f64) -> f64 {
        match self {
            SpaceForm::Flat => r,
            SpaceForm::Hyperbolic => r.sinh(),
        }
    }

    pub fn cos_k(self, r: f64) -> f64 {
        match self {
            SpaceForm::Flat => 1.0,
            SpaceForm::Hyperbolic => r.cosh(),
        }
    }

    /// `cos_k(r) − 1`, evaluated without cancellation.
    pub fn cos_k_minus_one(self, r: f64) -> f64 {
        match self {
            SpaceForm::Flat => 0.0,
            SpaceForm::Hyperbolic => {
                let s = (0.5 * r).sinh();
                2.0 * s * s
            }
        }
    }

    /// Sectional curvature (0 or −1).
    pub fn curvature(self) -> f64 {
        match self {
            SpaceForm::Flat => 0.0,
            SpaceForm::Hyperbolic => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceForm::Flat => "flat",
            SpaceForm::Hyperbolic => "hyperbolic",
        }
    }
}

impl std::fmt::Display for SpaceForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SpaceForm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "flat" | "euclidean" => Ok(SpaceForm::Flat),
            "hyperbolic" => Ok(SpaceForm::Hyperbolic),
            other => Err(format!("unknown space form `{other}` (expected flat or hyperbolic)")),
        }
    }
}

/// `sin_k(r)` for `r ≥ 0`.
pub fn sin_k(space: SpaceForm, r: f64) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(SteklovError::InvalidArgument {
            name: "r",
            value: r,
            reason: "radius must be non-negative",
        });
    }
    Ok(space.sin_k(r))
}

/// `cos_k(r)` for `r ≥ 0`.
pub fn cos_k(space: SpaceForm, r: f64) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(SteklovError::InvalidArgument {
            name: "r",
            value: r,
            reason: "radius must be non-negative",
        });
    }
    Ok(space.cos_k(r))
}

/// Area of the unit sphere `S^{d}` ⊂ ℝ^{d+1}: `2π^{(d+1)/2} / Γ((d+1)/2)`.
pub fn unit_sphere_area(d: usize) -> f64 {
    let half = (d + 1) as f64 / 2.0;
    2.0 * PI.powf(half) / gamma_half_integer(d + 1)
}

/// Γ(k/2) for a positive integer `k`, by recursion from Γ(1) = 1 and
/// Γ(1/2) = √π.
fn gamma_half_integer(k: usize) -> f64 {
    assert!(k >= 1);
    let (mut value, mut arg) = if k % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = k as f64 / 2.0;
    while arg < target {
        value *= arg;
        arg += 1.0;
    }
    value
}

/// `∫₀ʳ sin_k^m(t) dt / sin_k^m(r)` for `r > 0`.
///
/// Hyperbolic values come from the reduction recurrence
/// `J_m = (sinh^{m-1} r cosh r − (m−1) J_{m−2}) / m`, divided through by
/// `sinh^m r` so nothing overflows for large `r`.
fn normalized_power_integral(space: SpaceForm, m: usize, r: f64) -> f64 {
    match space {
        SpaceForm::Flat => r / (m as f64 + 1.0),
        SpaceForm::Hyperbolic => match m {
            0 => r,
            1 => (0.5 * r).tanh(),
            _ if r < SERIES_R => sinh_power_series_ratio(m, r),
            _ => {
                let s = r.sinh();
                let coth = r.cosh() / s;
                let inv_s2 = 1.0 / (s * s);
                let mut k = if m % 2 == 0 { 0 } else { 1 };
                let mut value = if k == 0 { r } else { (0.5 * r).tanh() };
                while k < m {
                    k += 2;
                    value = (coth - (k as f64 - 1.0) * value * inv_s2) / k as f64;
                }
                value
            }
        },
    }
}

/// Power-series evaluation of `∫₀ʳ sinh^m / sinh^m r` for moderate `r`.
fn sinh_power_series_ratio(m: usize, r: f64) -> f64 {
    let terms = 40 + 2 * m;
    // (sinh t / t) = Σ t^{2k} / (2k+1)!
    let mut base = vec![0.0; terms];
    let mut fact = 1.0;
    for (k, b) in base.iter_mut().enumerate() {
        if k > 0 {
            fact *= (2 * k) as f64 * (2 * k + 1) as f64;
        }
        *b = 1.0 / fact;
    }
    let mut coeffs = vec![0.0; terms];
    coeffs[0] = 1.0;
    for _ in 0..m {
        let mut next = vec![0.0; terms];
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for (j, &b) in base.iter().enumerate().take(terms - i) {
                next[i + j] += c * b;
            }
        }
        coeffs = next;
    }
    let x = r * r;
    let mut integral = 0.0;
    for (k, &c) in coeffs.iter().enumerate().rev() {
        integral = integral * x + c / (m + 2 * k + 1) as f64;
    }
    let ratio = r.sinh() / r;
    r * integral / ratio.powi(m as i32)
}

/// `∫₀ʳ sin_k^m(t) dt`.
pub fn power_integral(space: SpaceForm, m: usize, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    match space {
        SpaceForm::Flat => r.powi(m as i32 + 1) / (m as f64 + 1.0),
        SpaceForm::Hyperbolic => match m {
            0 => r,
            1 => space.cos_k_minus_one(r),
            _ => normalized_power_integral(space, m, r) * r.sinh().powi(m as i32),
        },
    }
}

/// The radial profile of the first Steklov eigenfunctions of geodesic balls
/// in the `n`-dimensional space form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProfile {
    space: SpaceForm,
    n: usize,
}

impl RadialProfile {
    pub fn new(space: SpaceForm, n: usize) -> Result<Self> {
        require_dimension(n)?;
        Ok(Self { space, n })
    }

    pub fn space(&self) -> SpaceForm {
        self.space
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn g(&self, r: f64) -> Result<f64> {
        require_positive("r", r)?;
        Ok(self.g_unchecked(r))
    }

    pub fn g_prime(&self, r: f64) -> Result<f64> {
        require_positive("r", r)?;
        Ok(self.g_prime_unchecked(r))
    }

    /// `F(r) = g'(r)² + (n−1)·g(r)²/sin_k²(r)`.
    pub fn profile_f(&self, r: f64) -> Result<f64> {
        require_positive("r", r)?;
        Ok(self.profile_f_unchecked(r))
    }

    /// `g(r)/sin_k(r)`, finite as `r → 0⁺` (limit `1/n`).
    pub fn g_over_sin(&self, r: f64) -> Result<f64> {
        require_positive("r", r)?;
        Ok(self.g_over_sin_unchecked(r))
    }

    pub(crate) fn g_unchecked(&self, r: f64) -> f64 {
        let n = self.nf();
        match self.space {
            SpaceForm::Flat => r / n,
            SpaceForm::Hyperbolic if r < SMALL_R => r / n - (n - 1.0) * r * r * r / (3.0 * n * (n + 2.0)),
            SpaceForm::Hyperbolic => normalized_power_integral(self.space, self.n - 1, r),
        }
    }

    pub(crate) fn g_prime_unchecked(&self, r: f64) -> f64 {
        let n = self.nf();
        match self.space {
            SpaceForm::Flat => 1.0 / n,
            SpaceForm::Hyperbolic if r < SMALL_R => 1.0 / n - (n - 1.0) * r * r / (n * (n + 2.0)),
            SpaceForm::Hyperbolic if self.n == 2 => 0.5 / (0.5 * r).cosh().powi(2),
            SpaceForm::Hyperbolic if r < LARGE_R => 1.0 - (n - 1.0) * self.g_unchecked(r) * r.cosh() / r.sinh(),
            SpaceForm::Hyperbolic => {
                // one recurrence step folded in: no cancellation once r is large
                let s = r.sinh();
                let lower = normalized_power_integral(self.space, self.n - 3, r);
                ((n - 2.0) * (r.cosh() / s) * lower - 1.0) / (s * s)
            }
        }
    }

    pub(crate) fn g_over_sin_unchecked(&self, r: f64) -> f64 {
        let n = self.nf();
        match self.space {
            SpaceForm::Flat => 1.0 / n,
            SpaceForm::Hyperbolic if r < SMALL_R => 1.0 / n - r * r / (2.0 * (n + 2.0)),
            SpaceForm::Hyperbolic => self.g_unchecked(r) / r.sinh(),
        }
    }

    pub(crate) fn profile_f_unchecked(&self, r: f64) -> f64 {
        match self.space {
            SpaceForm::Flat => 1.0 / self.nf(),
            SpaceForm::Hyperbolic => {
                let gp = self.g_prime_unchecked(r);
                let q = self.g_over_sin_unchecked(r);
                gp * gp + (self.nf() - 1.0) * q * q
            }
        }
    }

    /// `g(r)/r`, the weight applied to `X` in the center-of-mass moment;
    /// tends to `1/n` at the origin.
    pub(crate) fn g_over_r(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 1.0 / self.nf();
        }
        if r < SMALL_R {
            let n = self.nf();
            return 1.0 / n - (n - 1.0) * r * r / (3.0 * n * (n + 2.0));
        }
        self.g_unchecked(r) / r
    }
}

/// `g(r)` for the profile; `r` must be positive.
pub fn g_value(profile: &RadialProfile, r: f64) -> Result<f64> {
    profile.g(r)
}

pub fn g_prime(profile: &RadialProfile, r: f64) -> Result<f64> {
    profile.g_prime(r)
}

pub fn profile_f(profile: &RadialProfile, r: f64) -> Result<f64> {
    profile.profile_f(r)
}

/// First nonzero Steklov eigenvalue of the geodesic ball `B(R)`, from the
/// boundary condition `g'(R) = μ₁ g(R)`.
pub fn mu1_ball(space: SpaceForm, n: usize, radius: f64) -> Result<f64> {
    require_positive("R", radius)?;
    let profile = RadialProfile::new(space, n)?;
    Ok(profile.g_prime_unchecked(radius) / profile.g_unchecked(radius))
}

/// The same eigenvalue from the Rayleigh quotient of `g(r)·x₁/r` on the
/// ball: `∫₀ᴿ F sin_k^{n-1} dr / (g²(R) sin_k^{n-1}(R))`.
pub fn mu1_ball_rayleigh(space: SpaceForm, n: usize, radius: f64) -> Result<f64> {
    require_positive("R", radius)?;
    let profile = RadialProfile::new(space, n)?;
    let m = (n - 1) as i32;
    // scale out sin_k^{n-1}(R) inside the integrand to keep values O(1)
    let s_r = space.sin_k(radius);
    let numerator = integrate_adaptive(
        |r| {
            if r <= 0.0 {
                return 0.0;
            }
            profile.profile_f_unchecked(r) * (space.sin_k(r) / s_r).powi(m)
        },
        0.0,
        radius,
        1e-300,
        1e-14,
    );
    let g = profile.g_unchecked(radius);
    Ok(numerator / (g * g))
}

/// Both forms of the ball eigenvalue together with their relative
/// discrepancy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpectrum {
    pub space: SpaceForm,
    pub n: usize,
    pub radius: f64,
    pub mu1: f64,
    pub mu1_rayleigh: f64,
    pub multiplicity: usize,
}

impl BallSpectrum {
    pub fn new(space: SpaceForm, n: usize, radius: f64) -> Result<Self> {
        Ok(Self {
            space,
            n,
            radius,
            mu1: mu1_ball(space, n, radius)?,
            mu1_rayleigh: mu1_ball_rayleigh(space, n, radius)?,
            multiplicity: n,
        })
    }

    pub fn discrepancy(&self) -> f64 {
        ((self.mu1 - self.mu1_rayleigh) / self.mu1).abs()
    }
}

/// Volume of the geodesic ball `B(R)` in the `n`-dimensional space form.
pub fn ball_volume(space: SpaceForm, n: usize, radius: f64) -> Result<f64> {
    require_dimension(n)?;
    require_positive("R", radius)?;
    Ok(unit_sphere_area(n - 1) * power_integral(space, n - 1, radius))
}

/// Volume of the geodesic sphere `S(R)`: `ω_{n−1} sin_k^{n−1}(R)`.
pub fn sphere_volume(space: SpaceForm, n: usize, radius: f64) -> Result<f64> {
    require_dimension(n)?;
    require_positive("R", radius)?;
    Ok(unit_sphere_area(n - 1) * space.sin_k(radius).powi(n as i32 - 1))
}

/// The radius `R` of the geodesic ball with the given volume.
pub fn radius_from_volume(space: SpaceForm, n: usize, volume: f64) -> Result<f64> {
    require_dimension(n)?;
    require_positive("V", volume)?;
    let f = |r: f64| ball_volume(space, n, r).map(|v| v - volume);

    let mut lo = 0.0;
    let mut hi = 1.0;
    while f(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Err(SteklovError::InvalidArgument {
                name: "V",
                value: volume,
                reason: "volume too large to bracket a radius",
            });
        }
    }
    // Newton on the bracket, falling back to bisection when a step leaves it;
    // the derivative of the ball volume is the sphere volume.
    let mut r = 0.5 * (lo + hi);
    for _ in 0..200 {
        let residual = f(r)?;
        if residual.abs() <= 1e-15 * volume {
            return Ok(r);
        }
        if residual < 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        let slope = sphere_volume(space, n, r)?;
        let step = r - residual / slope;
        r = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok(r)
}

/// Right-hand side of the harmonic-mean inequality at the ball: the sum of
/// `1/μᵢ(B(R))` over `i = 1..n−1` (hyperbolic) or `i = 1..n` (flat).
pub fn harmonic_sum_ball(space: SpaceForm, n: usize, radius: f64) -> Result<f64> {
    match space {
        SpaceForm::Flat => {
            require_dimension(n)?;
            require_positive("R", radius)?;
            Ok(n as f64 * radius)
        }
        SpaceForm::Hyperbolic => Ok((n as f64 - 1.0) / mu1_ball(space, n, radius)?),
    }
}
