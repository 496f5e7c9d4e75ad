use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use steklov_core::constructions::{certify, CenterOfMass, CertificateReport};
use steklov_core::fem::{assemble, mesh_star_domain, solve_with_options, steklov_solve, MeshStats, RefinementOptions};
use steklov_core::geometry::StarDomain;

use crate::config::{DomainSpec, ExperimentConfig};

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Overrides the config's refinement level count.
    pub levels: Option<u32>,
    /// Halves every certificate tolerance.
    pub strict: bool,
}

impl RunOptions {
    pub fn tolerance_factor(&self) -> f64 {
        if self.strict {
            0.5
        } else {
            1.0
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumSummary {
    pub eigenvalues: Vec<f64>,
    /// Absent for single-level runs.
    pub error_estimates: Option<Vec<f64>>,
    pub level_eigenvalues: Vec<Vec<f64>>,
    pub mesh_stats: Vec<MeshStats>,
    pub non_monotone: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct DomainRun {
    pub spectrum: SpectrumSummary,
    pub center: Option<CenterOfMass>,
    pub reports: Vec<CertificateReport>,
}

#[derive(Debug, Clone)]
pub struct DomainResult {
    pub index: usize,
    pub label: String,
    pub descriptor: String,
    pub outcome: Result<DomainRun, String>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub config_sha256: String,
    pub family: &'static str,
    pub space: String,
    pub levels: u32,
    pub base_level: u32,
    pub tolerance_factor: f64,
    pub domains: Vec<DomainResult>,
    pub wall_time_s: f64,
    pub timestamp_unix: u64,
}

impl RunReport {
    pub fn failures(&self) -> usize {
        self.domains
            .iter()
            .map(|d| match &d.outcome {
                Ok(run) => run.reports.iter().filter(|r| !r.pass).count(),
                Err(_) => 1,
            })
            .sum()
    }

    pub fn all_pass(&self) -> bool {
        self.failures() == 0
    }

    pub fn exit_code(&self) -> u8 {
        if self.all_pass() {
            crate::EXIT_PASS
        } else {
            crate::EXIT_FAIL
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs every domain of the sweep (concurrently; rows keep sweep order).
pub fn run(config: &ExperimentConfig, config_text: &str, opts: RunOptions) -> Result<RunReport, crate::ConfigError> {
    let start = Instant::now();
    let mut config = config.clone();
    if let Some(levels) = opts.levels {
        config.levels = levels;
        config.validate()?;
    }
    let specs = config.domains()?;
    let refinement = RefinementOptions {
        base_level: config.base_level,
        levels: config.levels,
        ..RefinementOptions::default()
    };
    let factor = opts.tolerance_factor();
    let domains: Vec<DomainResult> = specs
        .par_iter()
        .enumerate()
        .map(|(index, spec)| DomainResult {
            index,
            label: spec.label.clone(),
            descriptor: spec.domain.describe(),
            outcome: run_domain(&config, spec, &refinement, factor),
        })
        .collect();
    Ok(RunReport {
        config_sha256: sha256_hex(config_text.as_bytes()),
        family: config.family.name(),
        space: config.space.to_string(),
        levels: config.levels,
        base_level: config.base_level,
        tolerance_factor: factor,
        domains,
        wall_time_s: start.elapsed().as_secs_f64(),
        timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
    })
}

fn run_domain(
    config: &ExperimentConfig,
    spec: &DomainSpec,
    refinement: &RefinementOptions,
    factor: f64,
) -> Result<DomainRun, String> {
    let domain = &spec.domain;
    if !config.certificates.is_empty() {
        let certs = certify(domain, &config.certificates, config.eigen_count, refinement).map_err(|e| e.to_string())?;
        let s = certs.spectrum.expect("certificates always solve");
        return Ok(DomainRun {
            spectrum: SpectrumSummary {
                eigenvalues: s.eigenvalues().to_vec(),
                error_estimates: Some(s.error_estimates.clone()),
                level_eigenvalues: s.level_eigenvalues.clone(),
                mesh_stats: s.mesh_stats.clone(),
                non_monotone: s.non_monotone.clone(),
            },
            center: Some(certs.center),
            reports: certs.reports.iter().map(|r| r.rescaled(factor)).collect(),
        });
    }
    let spectrum = if config.levels >= 2 {
        let s = solve_with_options(domain, config.eigen_count, refinement).map_err(|e| e.to_string())?;
        SpectrumSummary {
            eigenvalues: s.eigenvalues().to_vec(),
            error_estimates: Some(s.error_estimates.clone()),
            level_eigenvalues: s.level_eigenvalues.clone(),
            mesh_stats: s.mesh_stats.clone(),
            non_monotone: s.non_monotone.clone(),
        }
    } else {
        single_level(domain, config.base_level, config.eigen_count).map_err(|e| e.to_string())?
    };
    Ok(DomainRun { spectrum, center: None, reports: Vec::new() })
}

fn single_level(domain: &StarDomain, level: u32, count: usize) -> steklov_core::Result<SpectrumSummary> {
    let mesh = mesh_star_domain(domain, level)?;
    let spec = steklov_solve(&assemble(&mesh)?, count)?;
    Ok(SpectrumSummary {
        eigenvalues: spec.eigenvalues.clone(),
        error_estimates: None,
        level_eigenvalues: vec![spec.eigenvalues],
        mesh_stats: vec![mesh.stats()],
        non_monotone: Vec::new(),
    })
}
