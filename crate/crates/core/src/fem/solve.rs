use nalgebra::{Cholesky, DMatrix, SymmetricEigen};

use crate::error::{Result, SteklovError};
use crate::geometry::StarDomain;
use crate::radial::SpaceForm;

use super::assembly::{assemble_with, AssemblyMethod, SteklovSystem};
use super::mesh::{mesh_star_domain, MeshStats};
use super::sparse::BandCholesky;

/// Discrete Dirichlet-to-Neumann operator on the boundary degrees of freedom:
/// the Schur complement `S = K_bb − K_bi K_ii⁻¹ K_ib` and the boundary mass
/// `M_bb`, both ordered along the boundary loop.
#[derive(Debug, Clone)]
pub struct DtnOperator {
    pub schur: DMatrix<f64>,
    pub mass: DMatrix<f64>,
}

impl DtnOperator {
    /// `yᵀSy / yᵀMy`
    pub fn rayleigh_quotient(&self, y: &[f64]) -> f64 {
        let v = nalgebra::DVector::from_column_slice(y);
        v.dot(&(&self.schur * &v)) / v.dot(&(&self.mass * &v))
    }

    pub fn dim(&self) -> usize {
        self.schur.nrows()
    }
}

pub fn schur_complement(system: &SteklovSystem) -> Result<DtnOperator> {
    let k = &system.stiffness;
    let nb = system.boundary.len();
    let chol = BandCholesky::factor(k, &system.interior, "K_ii")?;

    let mut local = vec![usize::MAX; k.dim()];
    for (l, &g) in system.interior.iter().enumerate() {
        local[g] = l;
    }
    // Y = L⁻¹ K_ib, one column per boundary vertex; rows before `start` vanish
    let ni = system.interior.len();
    let mut columns: Vec<(usize, Vec<f64>)> = Vec::with_capacity(nb);
    for &b in &system.boundary {
        let mut rhs = vec![0.0; ni];
        let mut start = ni;
        for (j, v) in k.row(b) {
            let l = local[j];
            if l != usize::MAX {
                rhs[l] = v;
                start = start.min(l);
            }
        }
        if start < ni {
            chol.forward_from(&mut rhs, start);
        }
        let tail = rhs.split_off(start.min(ni));
        columns.push((start, tail));
    }

    let mut schur = DMatrix::zeros(nb, nb);
    let mut mass = DMatrix::zeros(nb, nb);
    for c in 0..nb {
        for d in 0..=c {
            let (gc, gd) = (system.boundary[c], system.boundary[d]);
            let (sc, yc) = &columns[c];
            let (sd, yd) = &columns[d];
            let from = (*sc).max(*sd);
            let dot: f64 = if from < ni {
                yc[from - sc..].iter().zip(&yd[from - sd..]).map(|(a, b)| a * b).sum()
            } else {
                0.0
            };
            let s = k.get(gc, gd) - dot;
            schur[(c, d)] = s;
            schur[(d, c)] = s;
            let m = system.boundary_mass.get(gc, gd);
            mass[(c, d)] = m;
            mass[(d, c)] = m;
        }
    }
    Ok(DtnOperator { schur, mass })
}

/// Lowest Steklov eigenpairs of one discretization.
#[derive(Debug, Clone)]
pub struct SteklovSpectrum {
    pub space: SpaceForm,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Boundary traces along the boundary loop, `M_b`-orthonormal.
    pub boundary_eigenvectors: Vec<Vec<f64>>,
    pub boundary_theta: Vec<f64>,
    pub mesh_h: f64,
    pub level: u32,
}

/// A boundary eigenvector as a function of the polar angle, piecewise
/// linear between boundary vertices.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryTrace<'a> {
    theta: &'a [f64],
    values: &'a [f64],
}

impl BoundaryTrace<'_> {
    pub fn eval(&self, theta: f64) -> f64 {
        // boundary vertices are equally spaced from θ = 0
        let n = self.values.len();
        let t = theta.rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU * n as f64;
        let k = (t.floor() as usize).min(n - 1);
        let w = t - k as f64;
        debug_assert!((self.theta[k] - std::f64::consts::TAU * k as f64 / n as f64).abs() < 1e-12);
        (1.0 - w) * self.values[k] + w * self.values[(k + 1) % n]
    }

    pub fn values(&self) -> &[f64] {
        self.values
    }
}

impl SteklovSpectrum {
    pub fn trace(&self, index: usize) -> BoundaryTrace<'_> {
        BoundaryTrace {
            theta: &self.boundary_theta,
            values: &self.boundary_eigenvectors[index],
        }
    }
}

/// Solves `S y = μ M_bb y` for the `count` smallest eigenvalues.
pub fn steklov_solve(system: &SteklovSystem, count: usize) -> Result<SteklovSpectrum> {
    let nb = system.boundary.len();
    if count == 0 || count > nb {
        return Err(SteklovError::InvalidArgument {
            name: "count",
            value: count as f64,
            reason: "eigenvalue count must be between 1 and the number of boundary nodes",
        });
    }
    let dtn = schur_complement(system)?;
    let (values, vectors) = generalized_eigen(&dtn.schur, &dtn.mass, count)?;
    Ok(SteklovSpectrum {
        space: system.space,
        eigenvalues: values,
        boundary_eigenvectors: vectors,
        boundary_theta: system.boundary_theta.clone(),
        mesh_h: system.mesh_h,
        level: system.level,
    })
}

/// Lowest `count` eigenpairs of the symmetric-definite pencil `(a, m)`,
/// normalized so `yᵀ m y = 1` and the largest-magnitude entry is positive.
pub fn generalized_eigen(a: &DMatrix<f64>, m: &DMatrix<f64>, count: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let chol = Cholesky::new(m.clone()).ok_or_else(|| {
        let d = m.diagonal();
        let (lo, hi) = d.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(*v), hi.max(v.abs())));
        SteklovError::Factorization {
            matrix: "M_b",
            pivot: d.iter().position(|v| *v <= 0.0).unwrap_or(0),
            value: lo,
            condition: if lo > 0.0 { hi / lo } else { f64::INFINITY },
        }
    })?;
    let l = chol.l();
    let la = l.solve_lower_triangular(a).expect("Cholesky factor has a positive diagonal");
    let mut c = l
        .solve_lower_triangular(&la.transpose())
        .expect("Cholesky factor has a positive diagonal");
    let ct = c.transpose();
    c += ct;
    c *= 0.5;

    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    order.truncate(count);

    let lt = l.transpose();
    let mut values = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    for i in order {
        values.push(eig.eigenvalues[i]);
        let z = eig.eigenvectors.column(i).into_owned();
        let y = lt.solve_upper_triangular(&z).expect("Cholesky factor has a positive diagonal");
        let mut y: Vec<f64> = y.iter().copied().collect();
        let pivot = y.iter().copied().fold(0.0f64, |best, v| if v.abs() > best.abs() { v } else { best });
        if pivot < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
        vectors.push(y);
    }
    Ok((values, vectors))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefinementOptions {
    /// Coarsest level solved.
    pub base_level: u32,
    /// Number of levels, at least 2.
    pub levels: u32,
    pub method: AssemblyMethod,
}

impl Default for RefinementOptions {
    fn default() -> Self {
        Self { base_level: 0, levels: 3, method: AssemblyMethod::Conformal }
    }
}

/// Spectrum at the finest level plus per-eigenvalue error estimates
/// `|μ^(ℓ) − μ^(ℓ−1)| / 3` (Richardson, assuming O(h²) convergence).
#[derive(Debug, Clone)]
pub struct RefinedSpectrum {
    pub spectrum: SteklovSpectrum,
    pub error_estimates: Vec<f64>,
    /// Eigenvalues at each level, coarsest first.
    pub level_eigenvalues: Vec<Vec<f64>>,
    pub mesh_stats: Vec<MeshStats>,
    /// Eigenvalues whose sequence across levels is not monotone, or whose
    /// successive differences fail to shrink.
    pub non_monotone: Vec<bool>,
}

impl RefinedSpectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    pub fn any_non_monotone(&self) -> bool {
        self.non_monotone.iter().any(|&f| f)
    }
}

pub fn solve_with_refinement(domain: &StarDomain, count: usize, levels: u32) -> Result<RefinedSpectrum> {
    solve_with_options(domain, count, &RefinementOptions { levels, ..RefinementOptions::default() })
}

pub fn solve_with_options(domain: &StarDomain, count: usize, opts: &RefinementOptions) -> Result<RefinedSpectrum> {
    if opts.levels < 2 {
        return Err(SteklovError::InvalidArgument {
            name: "levels",
            value: opts.levels as f64,
            reason: "error estimates need at least two refinement levels",
        });
    }
    let mut level_eigenvalues = Vec::new();
    let mut mesh_stats = Vec::new();
    let mut finest = None;
    for level in opts.base_level..opts.base_level + opts.levels {
        let mesh = mesh_star_domain(domain, level)?;
        let system = assemble_with(&mesh, opts.method)?;
        let spectrum = steklov_solve(&system, count)?;
        mesh_stats.push(mesh.stats());
        level_eigenvalues.push(spectrum.eigenvalues.clone());
        finest = Some(spectrum);
    }
    let spectrum = finest.expect("at least two levels were solved");
    let n = level_eigenvalues.len();
    let error_estimates = (0..count)
        .map(|i| (level_eigenvalues[n - 1][i] - level_eigenvalues[n - 2][i]).abs() / 3.0)
        .collect();
    // changes below this are round-off (the zero eigenvalue in particular)
    let tiny = 1e-10 * level_eigenvalues.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let non_monotone = (0..count)
        .map(|i| {
            let seq: Vec<f64> = level_eigenvalues.iter().map(|v| v[i]).collect();
            let diffs: Vec<f64> = seq.windows(2).map(|w| w[1] - w[0]).collect();
            let mixed_sign = diffs.windows(2).any(|d| d[0].abs() > tiny && d[1].abs() > tiny && d[0].signum() != d[1].signum());
            let growing = diffs.windows(2).any(|d| d[1].abs() > d[0].abs() + tiny);
            mixed_sign || growing
        })
        .collect();
    Ok(RefinedSpectrum { spectrum, error_estimates, level_eigenvalues, mesh_stats, non_monotone })
}

/// Least-squares slope of `log error` against `log h`.
pub fn convergence_rate(h: &[f64], errors: &[f64]) -> Result<f64> {
    if h.len() != errors.len() || h.len() < 2 {
        return Err(SteklovError::InvalidArgument {
            name: "levels",
            value: h.len() as f64,
            reason: "a rate fit needs at least two matching (h, error) pairs",
        });
    }
    for &v in h.iter().chain(errors) {
        if !(v > 0.0) || !v.is_finite() {
            return Err(SteklovError::InvalidArgument {
                name: "error",
                value: v,
                reason: "rate fit requires positive finite values",
            });
        }
    }
    let x: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = errors.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    #[test]
    fn pencil_with_diagonal_mass() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 8.0]);
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let (vals, vecs) = generalized_eigen(&a, &m, 2).unwrap();
        assert!((vals[0] - 2.0).abs() < 1e-14 && (vals[1] - 4.0).abs() < 1e-14);
        assert!((vecs[1][1] - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(generalized_eigen(&a, &(-m), 1).is_err());
    }

    #[test]
    fn coarse_disk_spectrum() {
        let d = StarDomain::disk(SpaceForm::Flat, Point::origin(SpaceForm::Flat), 1.0).unwrap();
        let mesh = mesh_star_domain(&d, 0).unwrap();
        let sys = super::super::assembly::assemble(&mesh).unwrap();
        let s = steklov_solve(&sys, 3).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-10);
        assert!((s.eigenvalues[1] - 1.0).abs() < 0.02);
        assert!((s.eigenvalues[2] - 1.0).abs() < 0.02);
        let t = s.trace(0);
        assert!((t.eval(0.3) - t.eval(2.0)).abs() < 1e-10);
    }

    #[test]
    fn rate_of_exact_power_law() {
        let h = [0.4, 0.2, 0.1];
        let e: Vec<f64> = h.iter().map(|v| 3.0 * v * v).collect();
        assert!((convergence_rate(&h, &e).unwrap() - 2.0).abs() < 1e-12);
    }
}
