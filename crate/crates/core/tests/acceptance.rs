//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::thread;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steklov_core::constructions::*;
use steklov_core::fem::{convergence_rate, solve_with_options, RefinedSpectrum, RefinementOptions};
use steklov_core::geometry::*;
use steklov_core::radial::{ball_volume, mu1_ball, mu1_ball_rayleigh, RadialProfile, SpaceForm};

const H: SpaceForm = SpaceForm::Hyperbolic;
const F: SpaceForm = SpaceForm::Flat;

type Outcome = (bool, String);

struct TestDomain {
    label: String,
    domain: StarDomain,
    is_disk: bool,
}

struct Certified {
    label: String,
    domain: StarDomain,
    is_disk: bool,
    certs: DomainCertificates,
}

impl Certified {
    fn report(&self, name: &str) -> &CertificateReport {
        self.certs.reports.iter().find(|r| r.name == name).unwrap()
    }

    fn spectrum(&self) -> &RefinedSpectrum {
        self.certs.spectrum.as_ref().unwrap()
    }
}

fn profile(space: SpaceForm) -> RadialProfile {
    RadialProfile::new(space, 2).unwrap()
}

fn refinement() -> RefinementOptions {
    RefinementOptions { base_level: 1, levels: 2, ..RefinementOptions::default() }
}

fn test_domains() -> Vec<TestDomain> {
    let mut out = Vec::new();
    for aspect in [1.0f64, 1.5, 2.0, 3.0] {
        let (a, b) = (aspect.sqrt(), 1.0 / aspect.sqrt());
        let domain = StarDomain::ellipse(F, Point::origin(F), a, b, 16).unwrap().normalized_to_volume(PI).unwrap();
        out.push(TestDomain { label: format!("ellipse aspect {aspect}"), domain, is_disk: aspect == 1.0 });
    }
    let target = ball_volume(H, 2, 1.0).unwrap();
    for m in [2, 3] {
        for eps in [0.0, 0.1, 0.2] {
            let domain = StarDomain::perturbed_disk(H, Point::origin(H), 1.0, eps, m)
                .unwrap()
                .normalized_to_volume(target)
                .unwrap();
            out.push(TestDomain { label: format!("hyperbolic eps={eps} m={m}"), domain, is_disk: eps == 0.0 });
        }
    }
    out
}

fn certify_all(domains: Vec<TestDomain>) -> Result<Vec<Certified>, String> {
    thread::scope(|s| {
        let handles: Vec<_> = domains
            .into_iter()
            .map(|t| {
                s.spawn(move || {
                    let checks: Vec<Check> = Check::ALL.into_iter().filter(|c| c.applies_to(t.domain.space())).collect();
                    let certs = certify(&t.domain, &checks, 5, &refinement()).map_err(|e| format!("{}: {e}", t.label))?;
                    Ok(Certified { label: t.label, domain: t.domain, is_disk: t.is_disk, certs })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    })
}

fn sci(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(" ")
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn all_reports(set: &[&Certified], name: &str) -> Outcome {
    let mut worst = f64::INFINITY;
    let mut failed = Vec::new();
    for c in set {
        let r = c.report(name);
        worst = worst.min(r.gap + r.tol);
        if !r.pass {
            failed.push(format!("{} gap {:.3e} tol {:.3e}", c.label, r.gap, r.tol));
        }
    }
    if failed.is_empty() {
        (true, format!("{} domains, min gap+tol {worst:.3e}", set.len()))
    } else {
        (false, failed.join("; "))
    }
}

fn criterion_1(disk: &RefinedSpectrum) -> Outcome {
    let mu = disk.eigenvalues();
    let errs = [mu[0].abs(), rel(mu[1], 1.0), rel(mu[2], 1.0), rel(mu[3], 2.0), rel(mu[4], 2.0)];
    let ok = errs[0] < 1e-8 && errs[1] < 5e-3 && errs[2] < 5e-3 && errs[3] < 1e-2 && errs[4] < 1e-2;
    (ok, format!("mu = {:.3e} {:.6} {:.6} {:.6} {:.6}", mu[0], mu[1], mu[2], mu[3], mu[4]))
}

fn criterion_2() -> Outcome {
    let d = StarDomain::disk(H, Point::origin(H), 1.0).unwrap();
    let spec = match solve_with_options(&d, 5, &refinement()) {
        Ok(s) => s,
        Err(e) => return (false, e.to_string()),
    };
    let mu = spec.eigenvalues();
    let base = 1.0 / 1f64.sinh();
    let mut worst: f64 = 0.0;
    for k in 1..=4 {
        let exact = ((k + 1) / 2) as f64 * base;
        worst = worst.max(rel(mu[k], exact));
    }
    let ball = mu1_ball(H, 2, 1.0).unwrap();
    let ball_err = rel(mu[1], ball);
    (worst < 1e-2 && ball_err < 1e-2, format!("max rel err {worst:.2e}, vs mu1_ball {ball_err:.2e}"))
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for space in [F, H] {
        for n in 2..=6 {
            for radius in [0.5, 1.0, 2.0, 4.0] {
                let a = mu1_ball(space, n, radius).unwrap();
                let b = mu1_ball_rayleigh(space, n, radius).unwrap();
                worst = worst.max(rel(b, a));
            }
        }
    }
    (worst < 1e-10, format!("max rel discrepancy {worst:.2e}"))
}

fn criterion_4() -> Outcome {
    let grid: Vec<f64> = (0..400).map(|i| 1e-4 * (1e5f64).powf(i as f64 / 399.0)).collect();
    let mut failures = Vec::new();
    for space in [F, H] {
        for n in 2..=6 {
            let p = RadialProfile::new(space, n).unwrap();
            let mut prev_f = f64::INFINITY;
            for &r in &grid {
                let (g, gp, f) = (p.g(r).unwrap(), p.g_prime(r).unwrap(), p.profile_f(r).unwrap());
                if !(gp > 0.0) {
                    failures.push(format!("{space} n={n} r={r:.3e}: g' = {gp:e}"));
                }
                if gp * space.sin_k(r) > g * (1.0 + 1e-12) {
                    failures.push(format!("{space} n={n} r={r:.3e}: g' sin_k > g"));
                }
                if f > prev_f * (1.0 + 1e-12) {
                    failures.push(format!("{space} n={n} r={r:.3e}: F increases"));
                }
                prev_f = f;
            }
        }
    }
    match failures.first() {
        None => (true, "4000 grid points".into()),
        Some(first) => (false, format!("{} violations, first: {first}", failures.len())),
    }
}

fn criterion_5(flat: &[&Certified]) -> Outcome {
    let (ok, detail) = all_reports(flat, "theorem_euclidean");
    let disk = flat.iter().find(|c| c.is_disk).unwrap().report("theorem_euclidean");
    let eq = disk.gap.abs() / disk.rhs;
    (ok && eq < 1e-2, format!("{detail}; disk gap {eq:.2e} of bound"))
}

fn criterion_6(hyp: &[&Certified]) -> Outcome {
    let (ok, detail) = all_reports(hyp, "theorem_hyperbolic");
    let mut worst: f64 = 0.0;
    for c in hyp.iter().filter(|c| c.is_disk) {
        let r = c.report("theorem_hyperbolic");
        worst = worst.max(r.gap.abs() / r.rhs);
    }
    (ok && worst < 1e-2, format!("{detail}; disk gap {worst:.2e} of bound"))
}

fn criterion_7(all: &[&Certified]) -> Outcome {
    let (ok, detail) = all_reports(all, "boundary_g2");
    let worst = all.iter().filter(|c| c.is_disk).map(|c| c.report("boundary_g2").gap.abs()).fold(0.0, f64::max);
    (ok && worst < 1e-6, format!("{detail}; disk |gap| {worst:.2e}"))
}

fn criterion_8(hyp: &[&Certified], flat: &[&Certified]) -> Outcome {
    let (ok, detail) = all_reports(hyp, "f_rearrangement");
    let worst = flat.iter().map(|c| c.report("f_rearrangement").gap.abs()).fold(0.0, f64::max);
    (ok && worst < 1e-10, format!("{detail}; flat |gap| {worst:.2e}"))
}

fn grad_norm_sq_fd(prof: &RadialProfile, p: &Point, q: &Point) -> f64 {
    let phi = |x: &Point| {
        let (x1, _, r) = normal_coordinates(p, x).unwrap();
        prof.g(r).unwrap() * x1 / r
    };
    let h = 1e-5;
    [[h, 0.0], [0.0, h]]
        .iter()
        .map(|e| {
            let plus = exp_map(&TangentVector::new(*q, *e));
            let minus = exp_map(&TangentVector::new(*q, [-e[0], -e[1]]));
            let d = (phi(&plus) - phi(&minus)) / (2.0 * h);
            d * d
        })
        .sum()
}

fn criterion_9(all: &[&Certified]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for c in all {
        let prof = profile(c.domain.space());
        let p = c.certs.center.point;
        let mut n = 0;
        while n < 100 {
            let theta = rng.gen_range(0.0..TAU);
            let q = c.domain.point_at(theta, rng.gen_range(0.0..1.0) * c.domain.rho(theta));
            let (x1, _, r) = normal_coordinates(&p, &q).unwrap();
            if r <= 0.05 {
                continue;
            }
            let exact = grad_norm_sq_testfn(&prof, r, x1).unwrap();
            worst = worst.max(rel(grad_norm_sq_fd(&prof, &p, &q), exact));
            n += 1;
        }
    }
    (worst < 1e-6, format!("{} points, max rel err {worst:.2e}", 100 * all.len()))
}

fn criterion_10(all: &[&Certified]) -> Outcome {
    // every test domain is symmetric about its construction center
    let mut miss: f64 = 0.0;
    let mut residual: f64 = 0.0;
    for c in all {
        miss = miss.max(distance(&c.certs.center.point, &c.domain.center()).unwrap());
        residual = residual.max(c.certs.center.normalized_residual());
    }
    let mut equi: f64 = 0.0;
    let cases = [
        (
            StarDomain::perturbed_disk(H, Point::new(H, 0.2, -0.1), 1.0, 0.25, 1).unwrap(),
            Isometry::hyperbolic_boost(1.1, 0.4).compose(&Isometry::hyperbolic_rotation(2.0)),
        ),
        (
            StarDomain::perturbed_disk(F, Point::origin(F), 1.0, 0.3, 1).unwrap(),
            Isometry::euclidean(0.8, [1.0, 2.0]),
        ),
    ];
    for (d, iso) in &cases {
        let prof = profile(d.space());
        let p = center_of_mass(d, &prof).unwrap();
        let q = center_of_mass(&d.transformed(iso).unwrap(), &prof).unwrap();
        equi = equi.max(distance(&q.point, &iso.apply(&p.point)).unwrap());
        residual = residual.max(p.normalized_residual()).max(q.normalized_residual());
    }
    (
        miss < 1e-8 && equi < 1e-8 && residual < 1e-10,
        format!("center miss {miss:.2e}, equivariance {equi:.2e}, residual {residual:.2e}"),
    )
}

fn criterion_11(all: &[&Certified]) -> Outcome {
    let mut failed = Vec::new();
    for c in all {
        for name in ["rayleigh_1", "rayleigh_2"] {
            let r = c.report(name);
            if !r.pass {
                failed.push(format!("{} {name} gap {:.3e}", c.label, r.gap));
            }
        }
    }
    let mut worst: f64 = 0.0;
    for c in all.iter().filter(|c| c.is_disk) {
        let mu1 = c.spectrum().eigenvalues()[1];
        for name in ["rayleigh_1", "rayleigh_2"] {
            worst = worst.max(rel(c.report(name).lhs, mu1));
        }
    }
    let ok = failed.is_empty() && worst < 1e-4;
    let mut detail = format!("{} quotients, disk match {worst:.2e}", 2 * all.len());
    if !failed.is_empty() {
        detail = format!("{detail}; {}", failed.join("; "));
    }
    (ok, detail)
}

fn criterion_12(flat: &[&Certified]) -> Outcome {
    let (ok, detail) = all_reports(flat, "hersch_payne");
    let disk = flat.iter().find(|c| c.is_disk).unwrap().report("hersch_payne");
    let eq = disk.gap.abs() / disk.rhs;
    (ok && eq < 1e-2, format!("{detail}; disk gap {eq:.2e} of bound"))
}

fn criterion_13(disk: &RefinedSpectrum) -> Outcome {
    let h: Vec<f64> = disk.mesh_stats.iter().map(|s| s.h).collect();
    let errors: Vec<f64> = disk.level_eigenvalues.iter().map(|mu| (mu[1] - 1.0).abs()).collect();
    match convergence_rate(&h, &errors) {
        Ok(rate) => ((1.7..=2.3).contains(&rate), format!("rate {rate:.3}, errors {}", sci(&errors))),
        Err(e) => (false, e.to_string()),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let (certified, disk, quick) = thread::scope(|s| {
        let certified = s.spawn(|| certify_all(test_domains()));
        let disk = s.spawn(|| {
            let d = StarDomain::disk(F, Point::origin(F), 1.0).unwrap();
            solve_with_options(&d, 5, &RefinementOptions { base_level: 0, levels: 3, ..RefinementOptions::default() })
        });
        let c2 = s.spawn(criterion_2);
        let quick = [criterion_3(), criterion_4()];
        (certified.join().unwrap(), disk.join().unwrap(), (c2.join().unwrap(), quick))
    });
    let (c2, [c3, c4]) = quick;

    let setup_failure = |what: &str, e: String| (false, format!("{what} failed: {e}"));
    let (c1, c13) = match &disk {
        Ok(d) => (criterion_1(d), criterion_13(d)),
        Err(e) => (setup_failure("unit disk solve", e.to_string()), setup_failure("unit disk solve", e.to_string())),
    };
    let rest: Vec<Outcome> = match &certified {
        Ok(all) => {
            let all: Vec<&Certified> = all.iter().collect();
            let (flat, hyp): (Vec<&Certified>, Vec<&Certified>) = all.iter().partition(|c| c.domain.space() == F);
            vec![
                criterion_5(&flat),
                criterion_6(&hyp),
                criterion_7(&all),
                criterion_8(&hyp, &flat),
                criterion_9(&all),
                criterion_10(&all),
                criterion_11(&all),
                criterion_12(&flat),
            ]
        }
        Err(e) => (0..8).map(|_| setup_failure("certification", e.clone())).collect(),
    };

    let names = [
        "euclidean unit disk spectrum",
        "hyperbolic unit disk spectrum",
        "radial eigenvalue consistency",
        "radial profile lemma grid",
        "euclidean harmonic-mean certificate",
        "hyperbolic harmonic-mean certificate",
        "boundary g^2 certificate",
        "F rearrangement certificate",
        "test-function gradient identity",
        "center of mass",
        "test-function Rayleigh bounds",
        "Hersch-Payne certificate",
        "convergence order",
    ];
    let mut outcomes = vec![c1, c2, c3, c4];
    outcomes.extend(rest);
    outcomes.push(c13);

    let mut failed = 0;
    for (i, ((ok, detail), name)) in outcomes.iter().zip(names).enumerate() {
        println!("{} {:>2} {name}: {detail}", if *ok { "PASS" } else { "FAIL" }, i + 1);
        failed += usize::from(!ok);
    }
    println!("{} of {} criteria passed in {:.1}s", outcomes.len() - failed, outcomes.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
