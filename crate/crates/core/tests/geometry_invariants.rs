//! Sampled invariants of the domain oracles: membership versus ray casting,
//! boundary distance versus rays, frame reconstruction, decomposition
//! algebra, and convexity consistency.

use finsler_core::geometry::{point, Domain, ImplicitBuiltin, ImplicitSmooth, Vector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn test_domains() -> Vec<Domain> {
    vec![
        Domain::unit_ball(3),
        Domain::ball(point(&[0.3, -0.2, 0.1]), 1.7).unwrap(),
        Domain::half_space_x1(3),
        Domain::slab_x1(3, 0.8),
        Domain::ellipsoid_from_semi_axes(point(&[0.0, 0.0, 0.0]), &[1.0, 0.7, 0.4]).unwrap(),
        Domain::cube(3, 0.5).unwrap(),
        Domain::implicit(
            ImplicitSmooth::new(
                ImplicitBuiltin::EllipsoidLevelSet {
                    center: vec![0.0; 3],
                    semi_axes: vec![1.0, 0.7, 0.4],
                },
                3,
                1.5,
                true,
            )
            .unwrap(),
        ),
    ]
}

fn random_interior(domain: &Domain, rng: &mut ChaCha8Rng) -> Vector {
    let reference = domain.interior_reference();
    loop {
        let dir = Vector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
        if dir.norm() < 1e-9 {
            continue;
        }
        let candidate = &reference + rng.gen_range(0.0..1.5) * dir;
        if domain.contains(&candidate).unwrap_or(false) {
            return candidate;
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vector {
    loop {
        let v = Vector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
        if v.norm() > 1e-9 {
            return v.normalize();
        }
    }
}

#[test]
fn rays_agree_with_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for domain in test_domains() {
        for _ in 0..150 {
            let x = random_interior(&domain, &mut rng);
            let u = random_unit(&mut rng);
            let t = domain.ray_boundary_distance(&x, &u).unwrap();
            if t.is_infinite() {
                let far = &x + 1e4 * &u;
                assert!(domain.contains(&far).unwrap());
                continue;
            }
            for frac in [0.0, 0.25, 0.7, 0.999] {
                let p = &x + frac * t * &u;
                assert!(
                    domain.contains(&p).unwrap(),
                    "{} interior up to the exit",
                    domain.kind_name()
                );
            }
            let beyond = &x + (t + 1e-6) * &u;
            assert!(
                !domain.contains(&beyond).unwrap(),
                "{} exterior just past the exit (t = {t})",
                domain.kind_name()
            );
        }
    }
}

#[test]
fn boundary_distance_bounded_by_rays() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for domain in test_domains() {
        for _ in 0..40 {
            let x = random_interior(&domain, &mut rng);
            let delta = domain.boundary_distance(&x).unwrap();
            for _ in 0..64 {
                let u = random_unit(&mut rng);
                let t = domain.ray_boundary_distance(&x, &u).unwrap();
                assert!(
                    delta <= t + 1e-9,
                    "{}: delta {delta} exceeds ray {t}",
                    domain.kind_name()
                );
            }
        }
    }
}

#[test]
fn boundary_distance_matches_ray_toward_foot() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for domain in [
        Domain::unit_ball(3),
        Domain::half_space_x1(3),
        Domain::slab_x1(3, 0.8),
    ] {
        for _ in 0..200 {
            let x = random_interior(&domain, &mut rng);
            let frame = match domain.boundary_frame(&x) {
                Ok(f) => f,
                Err(_) => continue, // center / midplane degeneracies
            };
            let t = domain.ray_boundary_distance(&x, &frame.normal).unwrap();
            assert!((t - frame.delta).abs() <= 1e-6);
            assert!((domain.boundary_distance(&x).unwrap() - frame.delta).abs() <= 1e-12);
        }
    }
}

#[test]
fn frames_reconstruct_their_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for domain in test_domains() {
        let mut checked = 0;
        let mut attempts = 0;
        while checked < 60 && attempts < 3000 {
            attempts += 1;
            let x = random_interior(&domain, &mut rng);
            let frame = match domain.boundary_frame(&x) {
                Ok(f) => f,
                Err(_) => continue, // ties or outside the implicit collar
            };
            checked += 1;
            assert!(
                (frame.point() - &x).norm() <= 1e-8,
                "{} reconstruction",
                domain.kind_name()
            );
            assert!((frame.normal.norm() - 1.0).abs() <= 1e-12);
            assert!((frame.h * frame.h - frame.delta).abs() <= 1e-12);
            // the foot is on the boundary
            assert!(domain.signed_distance(&frame.foot).unwrap().abs() <= 1e-7);
        }
        assert!(checked >= 30, "{}: too few valid frames", domain.kind_name());
    }
}

#[test]
fn convex_midpoints_stay_interior() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    for domain in test_domains() {
        for _ in 0..200 {
            let a = random_interior(&domain, &mut rng);
            let b = random_interior(&domain, &mut rng);
            let mid = 0.5 * (&a + &b);
            assert!(domain.contains(&mid).unwrap(), "{}", domain.kind_name());
        }
    }
}

#[test]
fn implicit_ellipsoid_agrees_with_parametric() {
    // the same geometry through two unrelated code paths: closed forms
    // against bisection rays and Newton projection
    let semi = [1.0, 0.7, 0.4];
    let parametric = Domain::ellipsoid_from_semi_axes(point(&[0.0; 3]), &semi).unwrap();
    let implicit = Domain::implicit(
        ImplicitSmooth::new(
            ImplicitBuiltin::EllipsoidLevelSet {
                center: vec![0.0; 3],
                semi_axes: semi.to_vec(),
            },
            3,
            1.5,
            true,
        )
        .unwrap()
        .with_reach_fraction(0.15),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for _ in 0..120 {
        let x = random_interior(&parametric, &mut rng);
        assert_eq!(
            parametric.contains(&x).unwrap(),
            implicit.contains(&x).unwrap()
        );
        let u = random_unit(&mut rng);
        let t_p = parametric.ray_boundary_distance(&x, &u).unwrap();
        let t_i = implicit.ray_boundary_distance(&x, &u).unwrap();
        assert!((t_p - t_i).abs() <= 1e-8, "ray mismatch: {t_p} vs {t_i}");
        let d_p = parametric.boundary_distance(&x).unwrap();
        let d_i = implicit.boundary_distance(&x).unwrap();
        assert!((d_p - d_i).abs() <= 1e-8, "distance mismatch: {d_p} vs {d_i}");
        if let (Ok(f_p), Ok(f_i)) = (parametric.boundary_frame(&x), implicit.boundary_frame(&x)) {
            assert!((&f_p.foot - &f_i.foot).norm() <= 1e-6);
        }
    }
}

proptest! {
    #[test]
    fn decompose_is_an_orthogonal_split(
        coords in prop::array::uniform3(-0.9f64..0.9),
        v in prop::array::uniform3(-10.0f64..10.0),
    ) {
        let ball = Domain::ball(point(&[0.0, 0.0, 0.0]), 2.0).unwrap();
        let x = point(&coords);
        prop_assume!(x.norm() > 1e-6);
        let frame = ball.boundary_frame(&x).unwrap();
        let v = point(&v);
        let (vn, vt) = frame.decompose(&v);
        prop_assert!(((&vn + &vt) - &v).norm() <= 1e-12);
        prop_assert!(vn.dot(&vt).abs() <= 1e-12);
    }

    #[test]
    fn signed_distance_sign_matches_membership(
        coords in prop::array::uniform3(-2.0f64..2.0),
    ) {
        let ball = Domain::unit_ball(3);
        let x = point(&coords);
        let sd = ball.signed_distance(&x).unwrap();
        let inside = ball.contains(&x).unwrap();
        if sd < -1e-12 {
            prop_assert!(inside);
        }
        if sd > 1e-12 {
            prop_assert!(!inside);
        }
    }
}
