use std::f64::consts::PI;

use proptest::prelude::*;
use steklov_core::radial::*;

const H: SpaceForm = SpaceForm::Hyperbolic;
const F: SpaceForm = SpaceForm::Flat;

// 40-digit reference values (mpmath).
const SINH_1: f64 = 1.1752011936438014569;
const G_H2_2: f64 = 0.76159415595576488812;
const G_H4_1: f64 = 0.21461088420196885913;
const GP_H2_2: f64 = 0.2099871708070130347;
const F_H2_2: f64 = 0.088189223807067334539;
const F_H3_1: f64 = 0.17695817667703148846;
const F_H3_2: f64 = 0.036463459909649619665;
const MU1_H2_1: f64 = 0.85091812823932154513;
const MU1_H3_1: f64 = 0.76966722895076432133;
const MU1_H4_1: f64 = 0.72049006156787048591;
const HSUM_H4_1: f64 = 4.1638325912111122976;
const VOL_H2_1: f64 = 3.4122762652849023064;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Adaptive Simpson quadrature, independent of the library's rules.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `g` straight from its definition `sinh^{1−n}(r) ∫₀ʳ sinh^{n−1}`.
fn g_oracle(n: usize, r: f64) -> f64 {
    let m = (n - 1) as i32;
    simpson(&|t: f64| (t.sinh() / r.sinh()).powi(m), 0.0, r, 1e-15)
}

#[test]
fn closed_form_reference_values() {
    let p2 = RadialProfile::new(H, 2).unwrap();
    let p3 = RadialProfile::new(H, 3).unwrap();
    let p4 = RadialProfile::new(H, 4).unwrap();
    assert!(rel(p2.g(2.0).unwrap(), G_H2_2) < 1e-14);
    assert!(rel(p4.g(1.0).unwrap(), G_H4_1) < 1e-14);
    assert!(rel(p2.g_prime(2.0).unwrap(), GP_H2_2) < 1e-13);
    assert!(rel(p2.profile_f(2.0).unwrap(), F_H2_2) < 1e-13);
    assert!(rel(p3.profile_f(1.0).unwrap(), F_H3_1) < 1e-13);
    assert!(rel(p3.profile_f(2.0).unwrap(), F_H3_2) < 1e-13);
    assert!(rel(mu1_ball(H, 2, 1.0).unwrap(), MU1_H2_1) < 1e-14);
    assert!(rel(mu1_ball(H, 3, 1.0).unwrap(), MU1_H3_1) < 1e-13);
    assert!(rel(mu1_ball_rayleigh(H, 3, 1.0).unwrap(), MU1_H3_1) < 1e-12);
    assert!(rel(mu1_ball(H, 4, 1.0).unwrap(), MU1_H4_1) < 1e-13);
    assert!(rel(harmonic_sum_ball(H, 4, 1.0).unwrap(), HSUM_H4_1) < 1e-13);
    assert!(rel(harmonic_sum_ball(H, 2, 1.0).unwrap(), SINH_1) < 1e-14);
    assert!(rel(ball_volume(H, 2, 1.0).unwrap(), VOL_H2_1) < 1e-14);
    assert!(rel(sphere_volume(H, 2, 1.0).unwrap(), 2.0 * PI * SINH_1) < 1e-14);
}

#[test]
fn flat_profile_formulas() {
    for n in 2..=6 {
        let p = RadialProfile::new(F, n).unwrap();
        let nf = n as f64;
        for &r in &[0.1, 1.0, 7.5] {
            assert!(rel(p.g(r).unwrap(), r / nf) < 1e-15);
            assert_eq!(p.g_prime(r).unwrap(), 1.0 / nf);
            assert!(rel(p.profile_f(r).unwrap(), 1.0 / nf) < 1e-15);
            assert!(rel(mu1_ball(F, n, r).unwrap(), 1.0 / r) < 1e-15);
        }
    }
    assert!(rel(ball_volume(F, 3, 2.0).unwrap(), 32.0 * PI / 3.0) < 1e-14);
    assert_eq!(harmonic_sum_ball(F, 3, 2.0).unwrap(), 6.0);
}

#[test]
fn hyperbolic_g_matches_direct_quadrature() {
    for n in 2..=6 {
        let p = RadialProfile::new(H, n).unwrap();
        for &r in &[1e-3, 0.3, 0.99, 1.0, 1.01, 2.5, 6.0] {
            let want = g_oracle(n, r);
            assert!(rel(p.g(r).unwrap(), want) < 1e-11, "n={n} r={r}: {} vs {want}", p.g(r).unwrap());
        }
    }
}

#[test]
fn g_prime_matches_difference_quotient() {
    for n in 2..=6 {
        let p = RadialProfile::new(H, n).unwrap();
        for &r in &[0.05, 0.5, 1.0, 3.0] {
            let h = 1e-5 * r;
            let fd = (p.g(r + h).unwrap() - p.g(r - h).unwrap()) / (2.0 * h);
            assert!(rel(p.g_prime(r).unwrap(), fd) < 1e-8);
        }
    }
}

#[test]
fn rayleigh_form_agrees_with_boundary_condition() {
    for space in [F, H] {
        for n in 2..=6 {
            for &r in &[0.5, 1.0, 2.0, 4.0] {
                let ball = BallSpectrum::new(space, n, r).unwrap();
                assert!(ball.discrepancy() < 1e-10, "{space} n={n} R={r}: {}", ball.discrepancy());
                assert_eq!(ball.multiplicity, n);
            }
        }
    }
}

#[test]
fn two_dimensional_hyperbolic_identities() {
    // g = tanh(r/2), so g'·sinh r = g and μ₁(B(R)) = 1/sinh R
    let p = RadialProfile::new(H, 2).unwrap();
    for &r in &[0.01, 0.4, 1.0, 3.0, 8.0] {
        assert!(rel(p.g(r).unwrap(), (0.5 * r).tanh()) < 1e-14);
        assert!(rel(p.g_prime(r).unwrap() * r.sinh(), p.g(r).unwrap()) < 1e-12);
        assert!(rel(mu1_ball(H, 2, r).unwrap(), 1.0 / r.sinh()) < 1e-12);
    }
}

#[test]
fn radius_from_volume_inverts_ball_volume() {
    for space in [F, H] {
        for n in 2..=5 {
            for &r in &[0.2, 1.0, 3.0] {
                let v = ball_volume(space, n, r).unwrap();
                assert!(rel(radius_from_volume(space, n, v).unwrap(), r) < 1e-13);
            }
        }
    }
}

#[test]
fn invalid_arguments_are_rejected() {
    assert!(RadialProfile::new(H, 1).is_err());
    let p = RadialProfile::new(H, 2).unwrap();
    assert!(p.g(0.0).is_err());
    assert!(p.g(-1.0).is_err());
    assert!(p.g(f64::NAN).is_err());
    assert!(mu1_ball(F, 2, 0.0).is_err());
    assert!(sin_k(H, -0.5).is_err());
    assert!(radius_from_volume(H, 2, -1.0).is_err());
    assert_eq!("hyperbolic".parse::<SpaceForm>().unwrap(), H);
    assert!("spherical".parse::<SpaceForm>().is_err());
}

proptest! {
    #[test]
    fn profile_lemma_holds_everywhere(n in 2usize..=6, r in 1e-4f64..12.0) {
        let p = RadialProfile::new(H, n).unwrap();
        let g = p.g(r).unwrap();
        let gp = p.g_prime(r).unwrap();
        prop_assert!(gp > 0.0);
        prop_assert!(gp * r.sinh() <= g * (1.0 + 1e-12));
        let f1 = p.profile_f(r).unwrap();
        let f2 = p.profile_f(r * 1.01).unwrap();
        prop_assert!(f2 <= f1 * (1.0 + 1e-12));
    }

    #[test]
    fn ball_eigenvalue_decreases_with_radius(n in 2usize..=6, r in 0.05f64..6.0) {
        for space in [F, H] {
            prop_assert!(mu1_ball(space, n, r * 1.1).unwrap() < mu1_ball(space, n, r).unwrap());
        }
    }

    #[test]
    fn hyperbolic_ball_is_larger_than_flat(n in 2usize..=5, r in 0.05f64..4.0) {
        prop_assert!(ball_volume(H, n, r).unwrap() > ball_volume(F, n, r).unwrap());
    }
}
