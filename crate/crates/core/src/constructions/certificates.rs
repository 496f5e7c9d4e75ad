use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SteklovError};
use crate::fem::{solve_with_options, RefinedSpectrum, RefinementOptions};
use crate::geometry::{domain_volume, normal_coordinates_unchecked, BoundaryQuadrature, InteriorQuadrature, StarDomain};
use crate::quadrature::integrate_adaptive;
use crate::radial::{harmonic_sum_ball, radius_from_volume, sphere_volume, RadialProfile, SpaceForm};

use super::center::{center_of_mass, CenterOfMass};
use super::frame::{align_rotation, rayleigh_testfn, TestFunctionFrame};

/// Absolute tolerance for certificates that involve only quadrature.
pub const QUADRATURE_TOL: f64 = 1e-8;

/// Outcome of one inequality check `lhs ≥ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub name: &'static str,
    pub domain: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`.
    pub gap: f64,
    pub tol: f64,
    pub pass: bool,
    pub context: String,
}

impl CertificateReport {
    pub fn new(name: &'static str, domain: &StarDomain, lhs: f64, rhs: f64, tol: f64, context: String) -> Self {
        let gap = lhs - rhs;
        Self {
            name,
            domain: domain.describe(),
            lhs,
            rhs,
            gap,
            tol,
            pass: gap >= -tol,
            context,
        }
    }

    /// The same report judged with `tol·factor`.
    pub fn rescaled(&self, factor: f64) -> Self {
        let tol = self.tol * factor;
        Self { tol, pass: self.gap >= -tol, ..self.clone() }
    }

    /// `gap / |rhs|`.
    pub fn relative_gap(&self) -> f64 {
        self.gap / self.rhs.abs()
    }

    pub const CSV_HEADER: &'static str = "name,domain,lhs,rhs,gap,tol,pass";

    /// One CSV record in the column order of [`Self::CSV_HEADER`]; floats
    /// carry 17 significant digits.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            self.name,
            csv_field(&self.domain),
            self.lhs,
            self.rhs,
            self.gap,
            self.tol,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] lhs={:.10} rhs={:.10} gap={:.3e} tol={:.3e} {}",
            self.name,
            self.domain,
            self.lhs,
            self.rhs,
            self.gap,
            self.tol,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Radius of the geodesic disk with the domain's area.
pub fn volume_radius(domain: &StarDomain) -> Result<f64> {
    radius_from_volume(domain.space(), 2, domain_volume(domain))
}

/// `2·Σ wᵢ·eᵢ/μᵢ² + 1e−8`: eigenvalue error estimates propagated through
/// `wᵢ/μᵢ`.
fn reciprocal_tolerance(spectrum: &RefinedSpectrum, weights: &[(usize, f64)]) -> f64 {
    let mu = spectrum.eigenvalues();
    2.0 * weights
        .iter()
        .map(|&(i, w)| w.abs() * spectrum.error_estimates[i] / (mu[i] * mu[i]))
        .sum::<f64>()
        + QUADRATURE_TOL
}

fn require_eigenvalues(spectrum: &RefinedSpectrum, count: usize) -> Result<()> {
    if spectrum.eigenvalues().len() < count {
        return Err(SteklovError::InvalidArgument {
            name: "count",
            value: spectrum.eigenvalues().len() as f64,
            reason: "certificate needs more eigenvalues",
        });
    }
    Ok(())
}

fn require_space(domain: &StarDomain, space: SpaceForm) -> Result<()> {
    if domain.space() == space {
        Ok(())
    } else {
        Err(SteklovError::SpaceMismatch)
    }
}

fn error_context(spectrum: &RefinedSpectrum, upto: usize) -> String {
    let errs: Vec<String> = spectrum.error_estimates[1..upto].iter().map(|e| format!("{e:.3e}")).collect();
    format!("err=[{}]; h={:.4e}", errs.join(" "), spectrum.spectrum.mesh_h)
}

/// `∫_{∂Ω} g²(r) dA ≥ vol(S(R))·g²(R)`, with `r` measured from the center
/// of mass.
pub fn check_boundary_g2(domain: &StarDomain, profile: &RadialProfile, com: &CenterOfMass) -> Result<CertificateReport> {
    let radius = volume_radius(domain)?;
    let quad = BoundaryQuadrature::new(domain);
    let lhs = quad.integrate(|node| {
        let (_, _, r) = normal_coordinates_unchecked(&com.point, &node.point);
        let g = profile.g_over_r(r) * r;
        g * g
    });
    let g_r = profile.g(radius)?;
    let rhs = sphere_volume(domain.space(), 2, radius)? * g_r * g_r;
    Ok(CertificateReport::new("boundary_g2", domain, lhs, rhs, QUADRATURE_TOL, format!("R={radius:.12e}")))
}

/// `∫_{B(R)} F dV ≥ ∫_Ω F(r) dV`, the rearrangement step for the
/// decreasing profile `F`.
pub fn check_f_rearrangement(
    domain: &StarDomain,
    profile: &RadialProfile,
    com: &CenterOfMass,
) -> Result<CertificateReport> {
    let radius = volume_radius(domain)?;
    let space = domain.space();
    let lhs = TAU
        * integrate_adaptive(|r| profile.profile_f_unchecked(r) * space.sin_k(r), 0.0, radius, 1e-300, 1e-14);
    let rhs = InteriorQuadrature::new(domain).integrate(|node| {
        let (_, _, r) = normal_coordinates_unchecked(&com.point, &node.point);
        profile.profile_f_unchecked(r)
    });
    Ok(CertificateReport::new("f_rearrangement", domain, lhs, rhs, QUADRATURE_TOL, format!("R={radius:.12e}")))
}

/// `1/μ₁(Ω) ≥ 1/μ₁(B(R))` on a hyperbolic domain.
pub fn check_theorem_hyperbolic(domain: &StarDomain, spectrum: &RefinedSpectrum) -> Result<CertificateReport> {
    require_space(domain, SpaceForm::Hyperbolic)?;
    require_eigenvalues(spectrum, 2)?;
    let radius = volume_radius(domain)?;
    let mu = spectrum.eigenvalues();
    let lhs = 1.0 / mu[1];
    let rhs = harmonic_sum_ball(SpaceForm::Hyperbolic, 2, radius)?;
    let tol = reciprocal_tolerance(spectrum, &[(1, 1.0)]);
    let context = format!("R={radius:.12e}; {}", error_context(spectrum, 2));
    Ok(CertificateReport::new("theorem_hyperbolic", domain, lhs, rhs, tol, context))
}

/// `1/μ₁ + 1/μ₂ ≥ 2R` on a flat domain.
pub fn check_theorem_euclidean(domain: &StarDomain, spectrum: &RefinedSpectrum) -> Result<CertificateReport> {
    require_space(domain, SpaceForm::Flat)?;
    require_eigenvalues(spectrum, 3)?;
    let radius = volume_radius(domain)?;
    let mu = spectrum.eigenvalues();
    let lhs = 1.0 / mu[1] + 1.0 / mu[2];
    let rhs = harmonic_sum_ball(SpaceForm::Flat, 2, radius)?;
    let tol = reciprocal_tolerance(spectrum, &[(1, 1.0), (2, 1.0)]);
    let context = format!("R={radius:.12e}; {}", error_context(spectrum, 3));
    Ok(CertificateReport::new("theorem_euclidean", domain, lhs, rhs, tol, context))
}

/// `1/μ₁ + 1/μ₂ ≥ P(Ω)/π` on a flat domain.
pub fn check_hersch_payne(domain: &StarDomain, spectrum: &RefinedSpectrum) -> Result<CertificateReport> {
    require_space(domain, SpaceForm::Flat)?;
    require_eigenvalues(spectrum, 3)?;
    let mu = spectrum.eigenvalues();
    let perimeter = BoundaryQuadrature::new(domain).total_length;
    let lhs = 1.0 / mu[1] + 1.0 / mu[2];
    let rhs = perimeter / PI;
    let tol = reciprocal_tolerance(spectrum, &[(1, 1.0), (2, 1.0)]);
    let context = format!("P={perimeter:.12e}; {}", error_context(spectrum, 3));
    Ok(CertificateReport::new("hersch_payne", domain, lhs, rhs, tol, context))
}

/// `Σᵢ (1/μᵢ)·∫_Ω ‖∇(g·x̃ᵢ/r)‖² dV ≥ ∫_{∂Ω} g² dA` for `i = 1, 2`.
pub fn check_sum1_chain(
    domain: &StarDomain,
    frame: &TestFunctionFrame,
    profile: &RadialProfile,
    spectrum: &RefinedSpectrum,
) -> Result<CertificateReport> {
    require_eigenvalues(spectrum, 3)?;
    let q = rayleigh_testfn(domain, frame, profile)?;
    let mu = spectrum.eigenvalues();
    let lhs = q.energies[0] / mu[1] + q.energies[1] / mu[2];
    let rhs = BoundaryQuadrature::new(domain).integrate(|node| {
        let (_, _, r) = normal_coordinates_unchecked(&frame.center, &node.point);
        (profile.g_over_r(r) * r).powi(2)
    });
    let tol = reciprocal_tolerance(spectrum, &[(1, q.energies[0]), (2, q.energies[1])]);
    let context = format!("alpha={:.12e}; {}", frame.angle, error_context(spectrum, 3));
    Ok(CertificateReport::new("sum1_chain", domain, lhs, rhs, tol, context))
}

/// `Qᵢ ≥ μᵢ` for both test-function Rayleigh quotients.
pub fn check_rayleigh_bounds(
    domain: &StarDomain,
    frame: &TestFunctionFrame,
    profile: &RadialProfile,
    spectrum: &RefinedSpectrum,
) -> Result<[CertificateReport; 2]> {
    require_eigenvalues(spectrum, 3)?;
    let q = rayleigh_testfn(domain, frame, profile)?;
    let mu = spectrum.eigenvalues();
    let report = |i: usize, name: &'static str| {
        let tol = 2.0 * spectrum.error_estimates[i + 1] + QUADRATURE_TOL;
        let context = format!("err={:.3e}; h={:.4e}", spectrum.error_estimates[i + 1], spectrum.spectrum.mesh_h);
        CertificateReport::new(name, domain, q.quotients[i], mu[i + 1], tol, context)
    };
    Ok([report(0, "rayleigh_1"), report(1, "rayleigh_2")])
}

/// Named inequality checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    BoundaryG2,
    FRearrangement,
    TheoremHyperbolic,
    TheoremEuclidean,
    HerschPayne,
    Sum1Chain,
    RayleighBounds,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::BoundaryG2,
        Check::FRearrangement,
        Check::TheoremHyperbolic,
        Check::TheoremEuclidean,
        Check::HerschPayne,
        Check::Sum1Chain,
        Check::RayleighBounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::BoundaryG2 => "boundary_g2",
            Check::FRearrangement => "f_rearrangement",
            Check::TheoremHyperbolic => "theorem_hyperbolic",
            Check::TheoremEuclidean => "theorem_euclidean",
            Check::HerschPayne => "hersch_payne",
            Check::Sum1Chain => "sum1_chain",
            Check::RayleighBounds => "rayleigh_bounds",
        }
    }

    pub fn needs_spectrum(self) -> bool {
        !matches!(self, Check::BoundaryG2 | Check::FRearrangement)
    }

    /// Whether the check is defined on domains in `space`.
    pub fn applies_to(self, space: SpaceForm) -> bool {
        match self {
            Check::TheoremHyperbolic => space == SpaceForm::Hyperbolic,
            Check::TheoremEuclidean | Check::HerschPayne => space == SpaceForm::Flat,
            _ => true,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Check::ALL.iter().map(|c| c.name()).collect();
                format!("unknown certificate `{s}` (expected one of: {})", names.join(", "))
            })
    }
}

/// Everything computed for one domain.
#[derive(Debug, Clone)]
pub struct DomainCertificates {
    pub center: CenterOfMass,
    pub spectrum: Option<RefinedSpectrum>,
    pub frame: Option<TestFunctionFrame>,
    pub reports: Vec<CertificateReport>,
}

/// Runs the requested checks on `domain`; the FEM spectrum (at least three
/// eigenvalues) is computed once if any check needs it.
pub fn certify(
    domain: &StarDomain,
    checks: &[Check],
    eigen_count: usize,
    refinement: &RefinementOptions,
) -> Result<DomainCertificates> {
    if let Some(c) = checks.iter().find(|c| !c.applies_to(domain.space())) {
        return Err(SteklovError::InvalidDomain(format!("certificate {c} does not apply to {} domains", domain.space())));
    }
    let profile = RadialProfile::new(domain.space(), 2)?;
    let center = center_of_mass(domain, &profile)?;
    let spectrum = if checks.iter().any(|c| c.needs_spectrum()) {
        Some(solve_with_options(domain, eigen_count.max(3), refinement)?)
    } else {
        None
    };
    let frame = match &spectrum {
        Some(s) if checks.iter().any(|c| matches!(c, Check::Sum1Chain | Check::RayleighBounds)) => {
            let u1 = s.spectrum.trace(1);
            Some(align_rotation(domain, &profile, &center.point, |t| u1.eval(t))?)
        }
        _ => None,
    };
    let mut reports = Vec::new();
    for &check in checks {
        match check {
            Check::BoundaryG2 => reports.push(check_boundary_g2(domain, &profile, &center)?),
            Check::FRearrangement => reports.push(check_f_rearrangement(domain, &profile, &center)?),
            Check::TheoremHyperbolic => reports.push(check_theorem_hyperbolic(domain, spectrum.as_ref().unwrap())?),
            Check::TheoremEuclidean => reports.push(check_theorem_euclidean(domain, spectrum.as_ref().unwrap())?),
            Check::HerschPayne => reports.push(check_hersch_payne(domain, spectrum.as_ref().unwrap())?),
            Check::Sum1Chain => reports.push(check_sum1_chain(
                domain,
                frame.as_ref().unwrap(),
                &profile,
                spectrum.as_ref().unwrap(),
            )?),
            Check::RayleighBounds => reports.extend(check_rayleigh_bounds(
                domain,
                frame.as_ref().unwrap(),
                &profile,
                spectrum.as_ref().unwrap(),
            )?),
        }
    }
    Ok(DomainCertificates { center, spectrum, frame, reports })
}
