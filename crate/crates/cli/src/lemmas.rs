//! The radial profile lemma as a runnable check: `g' > 0`,
//! `g'·sin_k ≤ g`, and `F` non-increasing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steklov_core::radial::{RadialProfile, SpaceForm};

pub const GRID_POINTS: usize = 400;
pub const R_MIN: f64 = 1e-4;
pub const R_MAX: f64 = 10.0;
pub const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Default)]
pub struct LemmaReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl LemmaReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn log_grid() -> Vec<f64> {
    let ratio = R_MAX / R_MIN;
    (0..GRID_POINTS).map(|i| R_MIN * ratio.powf(i as f64 / (GRID_POINTS - 1) as f64)).collect()
}

fn check_point(p: &RadialProfile, r: f64, report: &mut LemmaReport) -> f64 {
    let space = p.space();
    let n = p.dimension();
    let (g, gp, f) = match (p.g(r), p.g_prime(r), p.profile_f(r)) {
        (Ok(g), Ok(gp), Ok(f)) => (g, gp, f),
        _ => {
            report.violations.push(format!("{space} n={n} r={r:e}: evaluation failed"));
            return f64::NAN;
        }
    };
    report.checked += 1;
    if !(gp > 0.0) {
        report.violations.push(format!("{space} n={n} r={r:e}: g' = {gp:e} is not positive"));
    }
    if gp * space.sin_k(r) > g * (1.0 + SLACK) {
        report.violations.push(format!("{space} n={n} r={r:e}: g'·sin_k = {:e} exceeds g = {g:e}", gp * space.sin_k(r)));
    }
    f
}

fn check_decrease(space: SpaceForm, n: usize, r: f64, before: f64, after: f64, report: &mut LemmaReport) {
    if after > before * (1.0 + SLACK) {
        report.violations.push(format!("{space} n={n} r={r:e}: F increases from {before:e} to {after:e}"));
    }
}

/// The fixed grid (`n = 2..=6`, 400 log-spaced radii in `[1e-4, 10]`, both
/// space forms) plus `samples` random radii in `[1e-4, 12]` drawn from
/// `seed`, each checked against a point 1% further out.
pub fn check_lemmas(seed: u64, samples: usize) -> LemmaReport {
    let mut report = LemmaReport::default();
    let grid = log_grid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for space in [SpaceForm::Flat, SpaceForm::Hyperbolic] {
        for n in 2..=6 {
            let p = RadialProfile::new(space, n).expect("n ≥ 2");
            let mut prev = f64::INFINITY;
            for &r in &grid {
                let f = check_point(&p, r, &mut report);
                check_decrease(space, n, r, prev, f, &mut report);
                prev = f;
            }
            for _ in 0..samples {
                let r = R_MIN * (12.0 / R_MIN).powf(rng.gen::<f64>());
                let f0 = check_point(&p, r, &mut report);
                let f1 = check_point(&p, r * 1.01, &mut report);
                check_decrease(space, n, r, f0, f1, &mut report);
            }
        }
    }
    report
}
