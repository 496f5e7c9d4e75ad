//! Experiment configuration files.
//!
//! A config is a TOML document; parameters under `[params]` may be a number
//! or a list of numbers, and lists are swept as a cartesian product in the
//! order the family declares its parameters (values in the order written).
//!
//! ```toml
//! space = "hyperbolic"
//! family = "perturbed_disk"
//! volume_normalize = true
//! levels = 2
//! base_level = 1
//! eigen_count = 5
//! certificates = ["theorem_hyperbolic", "boundary_g2"]
//! output_path = "results/perturbed"
//!
//! [params]
//! R = 1.0
//! eps = [0.0, 0.1, 0.2]
//! m = 2
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use steklov_core::constructions::Check;
use steklov_core::geometry::{Point, StarDomain};
use steklov_core::radial::{ball_volume, SpaceForm};

pub const DEFAULT_LEVELS: u32 = 2;
pub const DEFAULT_BASE_LEVEL: u32 = 1;
pub const DEFAULT_EIGEN_COUNT: usize = 5;
pub const DEFAULT_ELLIPSE_DEGREE: usize = 8;
pub const MAX_EPSILON: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// Dotted path of the offending field; empty for syntax errors.
    pub field: String,
    pub message: String,
}

impl ConfigError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "field `{}`: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Disk { radius: Vec<f64> },
    Ellipse { a: Vec<f64>, b: Vec<f64>, degree: usize, reference_radius: Vec<f64> },
    PerturbedDisk { radius: Vec<f64>, epsilon: Vec<f64>, m: Vec<usize> },
    CustomFourier { mean: f64, cos: Vec<f64>, sin: Vec<f64> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Disk { .. } => "disk",
            Family::Ellipse { .. } => "ellipse",
            Family::PerturbedDisk { .. } => "perturbed_disk",
            Family::CustomFourier { .. } => "custom_fourier",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub space: SpaceForm,
    pub family: Family,
    /// Domain center in ambient coordinates (`x₁, x₂` of the hyperboloid
    /// on ℍ²).
    pub center: [f64; 2],
    pub volume_normalize: bool,
    pub levels: u32,
    pub base_level: u32,
    pub eigen_count: usize,
    pub certificates: Vec<Check>,
    pub output_path: Option<PathBuf>,
}

/// One member of a family sweep.
#[derive(Debug, Clone)]
pub struct DomainSpec {
    pub label: String,
    pub domain: StarDomain,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Sweep {
    One(f64),
    Many(Vec<f64>),
}

impl Sweep {
    fn values(&self) -> Vec<f64> {
        match self {
            Sweep::One(v) => vec![*v],
            Sweep::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    space: String,
    family: String,
    #[serde(default)]
    center: Option<[f64; 2]>,
    #[serde(default)]
    volume_normalize: bool,
    levels: Option<u32>,
    base_level: Option<u32>,
    eigen_count: Option<usize>,
    #[serde(default)]
    certificates: Vec<String>,
    output_path: Option<PathBuf>,
    #[serde(default)]
    params: RawParams,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    #[serde(rename = "R")]
    radius: Option<Sweep>,
    a: Option<Sweep>,
    b: Option<Sweep>,
    eps: Option<Sweep>,
    m: Option<Sweep>,
    degree: Option<f64>,
    cos: Option<Vec<f64>>,
    sin: Option<Vec<f64>>,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::new("", e.to_string()))?;
        let space: SpaceForm = raw.space.parse().map_err(|e: String| ConfigError::new("space", e))?;
        let family = parse_family(&raw.family, &raw.params)?;

        let mut certificates = Vec::new();
        for (i, name) in raw.certificates.iter().enumerate() {
            let check: Check = name.parse().map_err(|e: String| ConfigError::new(format!("certificates[{i}]"), e))?;
            if !check.applies_to(space) {
                return Err(ConfigError::new(
                    format!("certificates[{i}]"),
                    format!("`{check}` does not apply to {space} domains"),
                ));
            }
            if !certificates.contains(&check) {
                certificates.push(check);
            }
        }

        let levels = raw.levels.unwrap_or(DEFAULT_LEVELS);
        let config = Self {
            space,
            family,
            center: raw.center.unwrap_or([0.0, 0.0]),
            volume_normalize: raw.volume_normalize,
            levels,
            base_level: raw.base_level.unwrap_or(DEFAULT_BASE_LEVEL),
            eigen_count: raw.eigen_count.unwrap_or(DEFAULT_EIGEN_COUNT),
            certificates,
            output_path: raw.output_path,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.levels == 0 {
            return Err(ConfigError::new("levels", "must be at least 1"));
        }
        if self.levels < 2 && !self.certificates.is_empty() {
            return Err(ConfigError::new("levels", "certificates need at least 2 levels for error estimates"));
        }
        if self.base_level + self.levels > 8 {
            return Err(ConfigError::new("levels", "finest refinement level must not exceed 7"));
        }
        let needs = if self.certificates.is_empty() { 1 } else { 3 };
        if self.eigen_count < needs {
            return Err(ConfigError::new("eigen_count", format!("must be at least {needs}")));
        }
        if self.center.iter().any(|c| !c.is_finite()) {
            return Err(ConfigError::new("center", "coordinates must be finite"));
        }
        Ok(())
    }

    /// Expands the family sweep into concrete domains, in declaration order.
    pub fn domains(&self) -> Result<Vec<DomainSpec>, ConfigError> {
        let center = Point::new(self.space, self.center[0], self.center[1]);
        let space = self.space;
        let mut out = Vec::new();
        let mut push = |label: String, domain: steklov_core::Result<StarDomain>, reference: f64| {
            let domain = domain.map_err(|e| ConfigError::new("params", format!("{label}: {e}")))?;
            let domain = if self.volume_normalize {
                let target = ball_volume(space, 2, reference).map_err(|e| ConfigError::new("params", e.to_string()))?;
                domain.normalized_to_volume(target).map_err(|e| ConfigError::new("params", format!("{label}: {e}")))?
            } else {
                domain
            };
            out.push(DomainSpec { label, domain });
            Ok::<(), ConfigError>(())
        };
        match &self.family {
            Family::Disk { radius } => {
                for &r in radius {
                    push(format!("R={r}"), StarDomain::disk(space, center, r), r)?;
                }
            }
            Family::Ellipse { a, b, degree, reference_radius } => {
                for &r in reference_radius {
                    for &ai in a {
                        for &bi in b {
                            let label = format!("R={r} a={ai} b={bi}");
                            push(label, StarDomain::ellipse(space, center, ai, bi, *degree), r)?;
                        }
                    }
                }
            }
            Family::PerturbedDisk { radius, epsilon, m } => {
                for &r in radius {
                    for &eps in epsilon {
                        for &mi in m {
                            let label = format!("R={r} eps={eps} m={mi}");
                            push(label, StarDomain::perturbed_disk(space, center, r, eps, mi), r)?;
                        }
                    }
                }
            }
            Family::CustomFourier { mean, cos, sin } => {
                let domain = StarDomain::new(space, center, *mean, cos.clone(), sin.clone());
                push(format!("R={mean} fourier degree {}", cos.len().max(sin.len())), domain, *mean)?;
            }
        }
        Ok(out)
    }
}

fn required(field: &'static str, value: &Option<Sweep>) -> Result<Vec<f64>, ConfigError> {
    let values = value
        .as_ref()
        .ok_or_else(|| ConfigError::new(format!("params.{field}"), "missing"))?
        .values();
    if values.is_empty() {
        return Err(ConfigError::new(format!("params.{field}"), "empty sweep"));
    }
    Ok(values)
}

fn positive(field: &'static str, values: Vec<f64>) -> Result<Vec<f64>, ConfigError> {
    match values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        Some(v) => Err(ConfigError::new(format!("params.{field}"), format!("{v} is not a positive number"))),
        None => Ok(values),
    }
}

fn integers(field: &'static str, values: Vec<f64>, min: usize) -> Result<Vec<usize>, ConfigError> {
    values
        .into_iter()
        .map(|v| {
            if v.fract() == 0.0 && v >= min as f64 && v < 1e6 {
                Ok(v as usize)
            } else {
                Err(ConfigError::new(format!("params.{field}"), format!("{v} is not an integer ≥ {min}")))
            }
        })
        .collect()
}

fn forbid(family: &str, fields: &[(&'static str, bool)]) -> Result<(), ConfigError> {
    match fields.iter().find(|(_, present)| *present) {
        Some((name, _)) => Err(ConfigError::new(format!("params.{name}"), format!("not a parameter of family `{family}`"))),
        None => Ok(()),
    }
}

fn parse_family(name: &str, p: &RawParams) -> Result<Family, ConfigError> {
    let (has_a, has_b, has_eps, has_m) = (p.a.is_some(), p.b.is_some(), p.eps.is_some(), p.m.is_some());
    let (has_deg, has_cos, has_sin) = (p.degree.is_some(), p.cos.is_some(), p.sin.is_some());
    match name {
        "disk" => {
            forbid(name, &[("a", has_a), ("b", has_b), ("eps", has_eps), ("m", has_m), ("degree", has_deg)])?;
            forbid(name, &[("cos", has_cos), ("sin", has_sin)])?;
            Ok(Family::Disk { radius: positive("R", required("R", &p.radius)?)? })
        }
        "ellipse" => {
            forbid(name, &[("eps", has_eps), ("m", has_m), ("cos", has_cos), ("sin", has_sin)])?;
            let degree = match p.degree {
                Some(d) => integers("degree", vec![d], 1)?[0],
                None => DEFAULT_ELLIPSE_DEGREE,
            };
            let reference_radius = match &p.radius {
                Some(_) => positive("R", required("R", &p.radius)?)?,
                None => vec![1.0],
            };
            Ok(Family::Ellipse {
                a: positive("a", required("a", &p.a)?)?,
                b: positive("b", required("b", &p.b)?)?,
                degree,
                reference_radius,
            })
        }
        "perturbed_disk" => {
            forbid(name, &[("a", has_a), ("b", has_b), ("degree", has_deg), ("cos", has_cos), ("sin", has_sin)])?;
            let epsilon = required("eps", &p.eps)?;
            if let Some(e) = epsilon.iter().find(|e| !(0.0..=MAX_EPSILON).contains(*e)) {
                return Err(ConfigError::new("params.eps", format!("{e} is outside [0, {MAX_EPSILON}]")));
            }
            Ok(Family::PerturbedDisk {
                radius: positive("R", required("R", &p.radius)?)?,
                epsilon,
                m: integers("m", required("m", &p.m)?, 1)?,
            })
        }
        "custom_fourier" => {
            forbid(name, &[("a", has_a), ("b", has_b), ("eps", has_eps), ("m", has_m), ("degree", has_deg)])?;
            let mean = match p.radius {
                Some(Sweep::One(r)) => positive("R", vec![r])?[0],
                Some(Sweep::Many(_)) => return Err(ConfigError::new("params.R", "custom_fourier takes a single mean radius")),
                None => return Err(ConfigError::new("params.R", "missing")),
            };
            let cos = p.cos.clone().unwrap_or_default();
            let sin = p.sin.clone().unwrap_or_default();
            if cos.iter().chain(&sin).any(|c| !c.is_finite()) {
                return Err(ConfigError::new("params.cos", "coefficients must be finite"));
            }
            Ok(Family::CustomFourier { mean, cos, sin })
        }
        other => Err(ConfigError::new(
            "family",
            format!("unknown family `{other}` (expected disk, ellipse, perturbed_disk or custom_fourier)"),
        )),
    }
}
