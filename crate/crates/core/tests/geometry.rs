use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steklov_core::geometry::*;
use steklov_core::radial::{ball_volume, SpaceForm};

const H: SpaceForm = SpaceForm::Hyperbolic;
const F: SpaceForm = SpaceForm::Flat;

fn random_point(rng: &mut ChaCha8Rng, space: SpaceForm, spread: f64) -> Point {
    Point::new(space, rng.gen_range(-spread..spread), rng.gen_range(-spread..spread))
}

#[test]
fn exp_log_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for space in [F, H] {
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let p = random_point(&mut rng, space, 2.0);
            let q = random_point(&mut rng, space, 2.0);
            let v = log_map(&p, &q).unwrap();
            let back = exp_map(&v);
            worst = worst.max(distance(&back, &q).unwrap());
            // |log_p q| is the geodesic distance
            assert!((v.norm() - distance(&p, &q).unwrap()).abs() < 1e-11 * (1.0 + v.norm()));
        }
        assert!(worst < 1e-11, "{space}: round trip error {worst:e}");
    }
}

#[test]
fn log_of_exp_recovers_vector() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let p = random_point(&mut rng, H, 1.5);
        let v = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let q = exp_map(&TangentVector::new(p, v));
        let w = log_map(&p, &q).unwrap();
        assert!((w.components[0] - v[0]).abs() < 1e-11 && (w.components[1] - v[1]).abs() < 1e-11);
    }
}

#[test]
fn distance_is_a_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for space in [F, H] {
        for _ in 0..300 {
            let a = random_point(&mut rng, space, 3.0);
            let b = random_point(&mut rng, space, 3.0);
            let c = random_point(&mut rng, space, 3.0);
            let ab = distance(&a, &b).unwrap();
            assert_eq!(ab, distance(&b, &a).unwrap());
            assert!(ab >= 0.0);
            assert!(ab <= distance(&a, &c).unwrap() + distance(&c, &b).unwrap() + 1e-12);
        }
    }
}

#[test]
fn hyperbolic_distance_matches_arccosh_formula() {
    let p = Point::new(H, 0.3, -1.2);
    let q = Point::new(H, -2.0, 0.5);
    let [p0, p1, p2] = p.ambient();
    let [q0, q1, q2] = q.ambient();
    let want = (p0 * q0 - p1 * q1 - p2 * q2).acosh();
    assert!((distance(&p, &q).unwrap() - want).abs() < 1e-13);
    // tiny separations stay accurate: ds² = dx² − dx₀² on the hyperboloid
    let r = Point::new(H, 0.3 + 1e-12, -1.2);
    let dx = r.coords()[0] - p.coords()[0];
    let want = dx * (1.0 - 0.09 / (p0 * p0)).sqrt();
    let d = distance(&p, &r).unwrap();
    assert!((d - want).abs() < 1e-10 * want);
}

#[test]
fn isometries_preserve_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let isos = [
        Isometry::euclidean(0.7, [1.0, -2.0]),
        Isometry::hyperbolic_boost(0.8, 1.1).compose(&Isometry::hyperbolic_rotation(-0.4)),
    ];
    for iso in isos {
        let space = iso.space();
        for _ in 0..100 {
            let a = random_point(&mut rng, space, 2.0);
            let b = random_point(&mut rng, space, 2.0);
            let before = distance(&a, &b).unwrap();
            let after = distance(&iso.apply(&a), &iso.apply(&b)).unwrap();
            assert!((before - after).abs() < 1e-11 * (1.0 + before));
        }
    }
}

#[test]
fn boost_moves_the_pole_by_its_rapidity() {
    let o = Point::origin(H);
    let q = Isometry::hyperbolic_boost(1.3, 0.4).apply(&o);
    assert!((distance(&o, &q).unwrap() - 1.3).abs() < 1e-14);
    let v = log_map(&o, &q).unwrap();
    assert!((v.components[1].atan2(v.components[0]) - 0.4).abs() < 1e-13);
}

#[test]
fn transformed_domain_is_the_image() {
    let c = Point::new(H, 0.2, 0.1);
    let d = StarDomain::perturbed_disk(H, c, 0.8, 0.2, 3).unwrap();
    let iso = Isometry::hyperbolic_boost(0.9, -0.6).compose(&Isometry::hyperbolic_rotation(0.3));
    let image = d.transformed(&iso).unwrap();
    for k in 0..16 {
        let theta = TAU * k as f64 / 16.0;
        let moved = iso.apply(&d.boundary_point(theta));
        let (x1, x2, r) = normal_coordinates(&image.center(), &moved).unwrap();
        let phi = x2.atan2(x1);
        assert!((image.rho(phi) - r).abs() < 1e-11);
    }
    assert!((image.volume() - d.volume()).abs() < 1e-12);
}

#[test]
fn ellipse_area_by_boundary_quadrature() {
    // high-degree truncation of the a = 2, b = 1 ellipse
    let e = StarDomain::ellipse(F, Point::origin(F), 2.0, 1.0, 60).unwrap();
    assert!((domain_volume(&e) - 2.0 * PI).abs() < 1e-10);
    let interior = InteriorQuadrature::new(&e);
    assert!((interior.integrate(|_| 1.0) - 2.0 * PI).abs() < 1e-10);
    // perimeter of the 2×1 ellipse (complete elliptic integral)
    let perimeter = 9.688448220547675;
    assert!((BoundaryQuadrature::new(&e).total_length - perimeter).abs() < 1e-8);
}

#[test]
fn geodesic_disk_measures() {
    for &r in &[0.5, 1.0, 2.0] {
        let d = StarDomain::disk(H, Point::new(H, -0.7, 0.4), r).unwrap();
        let quad = BoundaryQuadrature::new(&d);
        assert!((quad.total_length - TAU * r.sinh()).abs() < 1e-12 * r.sinh());
        assert!((domain_volume(&d) - ball_volume(H, 2, r).unwrap()).abs() < 1e-12);
        let interior = InteriorQuadrature::new(&d);
        assert!((interior.integrate(|_| 1.0) - ball_volume(H, 2, r).unwrap()).abs() < 1e-11);
        for node in &quad.nodes {
            assert!((distance(&d.center(), &node.point).unwrap() - r).abs() < 1e-12);
        }
    }
}

#[test]
fn volume_normalization_hits_target() {
    for space in [F, H] {
        let d = StarDomain::perturbed_disk(space, Point::origin(space), 1.3, 0.3, 2).unwrap();
        let target = ball_volume(space, 2, 1.0).unwrap();
        let n = d.normalized_to_volume(target).unwrap();
        assert!((n.volume() - target).abs() < 1e-12 * target);
    }
}

#[test]
fn invalid_domains_are_rejected() {
    let o = Point::origin(F);
    assert!(StarDomain::perturbed_disk(F, o, 1.0, 1.2, 2).is_err());
    assert!(StarDomain::disk(F, o, -1.0).is_err());
    assert!(StarDomain::new(F, o, f64::NAN, vec![], vec![]).is_err());
    assert!(Point::from_poincare(H, [0.6, 0.8]).is_err());
}
