use steklov_core::radial::{
    ball_volume, harmonic_sum_ball, mu1_ball, mu1_ball_rayleigh, sphere_volume, RadialProfile, SpaceForm,
};

use crate::report::fmt_f64;

pub const HEADER: &str = "space,n,R,g,g_prime,mu1,mu1_rayleigh,discrepancy,harmonic_sum,ball_volume,sphere_volume";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallRow {
    pub space: SpaceForm,
    pub n: usize,
    pub radius: f64,
    pub g: f64,
    pub g_prime: f64,
    pub mu1: f64,
    pub mu1_rayleigh: f64,
    pub discrepancy: f64,
    pub harmonic_sum: f64,
    pub ball_volume: f64,
    pub sphere_volume: f64,
}

impl BallRow {
    pub fn new(space: SpaceForm, n: usize, radius: f64) -> steklov_core::Result<Self> {
        let profile = RadialProfile::new(space, n)?;
        let mu1 = mu1_ball(space, n, radius)?;
        let mu1_rayleigh = mu1_ball_rayleigh(space, n, radius)?;
        Ok(Self {
            space,
            n,
            radius,
            g: profile.g(radius)?,
            g_prime: profile.g_prime(radius)?,
            mu1,
            mu1_rayleigh,
            discrepancy: ((mu1 - mu1_rayleigh) / mu1).abs(),
            harmonic_sum: harmonic_sum_ball(space, n, radius)?,
            ball_volume: ball_volume(space, n, radius)?,
            sphere_volume: sphere_volume(space, n, radius)?,
        })
    }

    pub fn csv_row(&self) -> String {
        let nums = [
            self.g,
            self.g_prime,
            self.mu1,
            self.mu1_rayleigh,
            self.discrepancy,
            self.harmonic_sum,
            self.ball_volume,
            self.sphere_volume,
        ];
        let mut row = format!("{},{},{}", self.space, self.n, fmt_f64(self.radius));
        for x in nums {
            row.push(',');
            row.push_str(&fmt_f64(x));
        }
        row
    }
}

/// One row per `(n, R)` pair, `n` outermost.
pub fn tabulate_balls(space: SpaceForm, ns: &[usize], radii: &[f64]) -> steklov_core::Result<Vec<BallRow>> {
    let mut rows = Vec::with_capacity(ns.len() * radii.len());
    for &n in ns {
        for &r in radii {
            rows.push(BallRow::new(space, n, r)?);
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BallRow]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}
