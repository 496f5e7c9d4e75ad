//! Output files of a run.
//!
//! * `certificates.csv`: `index,label,` followed by the certificate columns
//!   `name,domain,lhs,rhs,gap,tol,pass`.
//! * `spectra.csv`: `index,label,k,mu,error_estimate,non_monotone`.
//! * `convergence.csv`: `index,label,level,h,vertices,triangles,boundary_nodes,k,mu`.
//! * `provenance.json`: config hash, mesh statistics, center of mass, wall
//!   time and timestamp.
//!
//! Floats are written with 17 significant digits, so rerunning a config
//! reproduces every CSV byte for byte; only `wall_time_s` and
//! `timestamp_unix` in the provenance file change.

use std::fs;
use std::path::Path;

use serde::Serialize;
use steklov_core::constructions::CertificateReport;

use crate::run::RunReport;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Quotes a CSV field if needed.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn certificates_csv(report: &RunReport) -> String {
    let mut out = format!("index,label,{}\n", CertificateReport::CSV_HEADER);
    for d in &report.domains {
        if let Ok(run) = &d.outcome {
            for r in &run.reports {
                out.push_str(&format!("{},{},{}\n", d.index, csv_field(&d.label), r.csv_row()));
            }
        }
    }
    out
}

pub fn spectra_csv(report: &RunReport) -> String {
    let mut out = String::from("index,label,k,mu,error_estimate,non_monotone\n");
    for d in &report.domains {
        let Ok(run) = &d.outcome else { continue };
        let s = &run.spectrum;
        for (k, mu) in s.eigenvalues.iter().enumerate() {
            let err = s.error_estimates.as_ref().map(|e| fmt_f64(e[k])).unwrap_or_default();
            let flag = s.non_monotone.get(k).map(|f| f.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{k},{},{err},{flag}\n", d.index, csv_field(&d.label), fmt_f64(*mu)));
        }
    }
    out
}

pub fn convergence_csv(report: &RunReport) -> String {
    let mut out = String::from("index,label,level,h,vertices,triangles,boundary_nodes,k,mu\n");
    for d in &report.domains {
        let Ok(run) = &d.outcome else { continue };
        let s = &run.spectrum;
        for (stats, mus) in s.mesh_stats.iter().zip(&s.level_eigenvalues) {
            for (k, mu) in mus.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{k},{}\n",
                    d.index,
                    csv_field(&d.label),
                    stats.level,
                    fmt_f64(stats.h),
                    stats.vertices,
                    stats.triangles,
                    stats.boundary_nodes,
                    fmt_f64(*mu)
                ));
            }
        }
    }
    out
}

#[derive(Serialize)]
struct MeshEntry {
    level: u32,
    vertices: usize,
    triangles: usize,
    boundary_nodes: usize,
    h: f64,
}

#[derive(Serialize)]
struct CenterEntry {
    ambient: [f64; 3],
    normalized_residual: f64,
    iterations: usize,
    inside_hull: bool,
    alternate_root: Option<[f64; 3]>,
}

#[derive(Serialize)]
struct DomainEntry {
    index: usize,
    label: String,
    domain: String,
    error: Option<String>,
    mesh: Vec<MeshEntry>,
    center_of_mass: Option<CenterEntry>,
}

#[derive(Serialize)]
struct Provenance {
    tool: &'static str,
    version: &'static str,
    config_sha256: String,
    space: String,
    family: &'static str,
    levels: u32,
    base_level: u32,
    tolerance_factor: f64,
    failures: usize,
    domains: Vec<DomainEntry>,
    wall_time_s: f64,
    timestamp_unix: u64,
}

pub fn provenance_json(report: &RunReport) -> String {
    let domains = report
        .domains
        .iter()
        .map(|d| {
            let (mesh, center, error) = match &d.outcome {
                Ok(run) => (
                    run.spectrum
                        .mesh_stats
                        .iter()
                        .map(|s| MeshEntry {
                            level: s.level,
                            vertices: s.vertices,
                            triangles: s.triangles,
                            boundary_nodes: s.boundary_nodes,
                            h: s.h,
                        })
                        .collect(),
                    run.center.as_ref().map(|c| CenterEntry {
                        ambient: c.point.ambient(),
                        normalized_residual: c.normalized_residual(),
                        iterations: c.iterations,
                        inside_hull: c.inside_hull,
                        alternate_root: c.alternate_root.map(|p| p.ambient()),
                    }),
                    None,
                ),
                Err(e) => (Vec::new(), None, Some(e.clone())),
            };
            DomainEntry { index: d.index, label: d.label.clone(), domain: d.descriptor.clone(), error, mesh, center_of_mass: center }
        })
        .collect();
    let p = Provenance {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config_sha256: report.config_sha256.clone(),
        space: report.space.clone(),
        family: report.family,
        levels: report.levels,
        base_level: report.base_level,
        tolerance_factor: report.tolerance_factor,
        failures: report.failures(),
        domains,
        wall_time_s: report.wall_time_s,
        timestamp_unix: report.timestamp_unix,
    };
    serde_json::to_string_pretty(&p).expect("provenance serializes") + "\n"
}

pub fn write_outputs(report: &RunReport, dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("certificates.csv"), certificates_csv(report))?;
    fs::write(dir.join("spectra.csv"), spectra_csv(report))?;
    fs::write(dir.join("convergence.csv"), convergence_csv(report))?;
    fs::write(dir.join("provenance.json"), provenance_json(report))?;
    Ok(())
}
