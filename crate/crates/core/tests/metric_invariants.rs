//! Sampled invariants of the metric evaluators: homogeneity, symmetry, the
//! ball coincidences, the decreasing property, order monotonicity of q_k,
//! closed-form exactness on half-spaces and balls, the two-sided ball
//! bracket, and boundedness of delta_k against sqrt(delta).

use finsler_core::geometry::{point, Domain, Vector};
use finsler_core::metrics::{
    ball_lower_bound_expr, ball_upper_bound_expr, beltrami_klein, delta_k, delta_k_numeric,
    half_space_qk_closed_form, kobayashi_hilbert, q_from_delta, DeltaKOptions, MetricEvaluator,
    MetricKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_in_ball(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vector {
    loop {
        let x = Vector::from_fn(dim, |_, _| rng.gen_range(-radius..radius));
        if x.norm() < radius {
            return x;
        }
    }
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    loop {
        let v = Vector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        if v.norm() > 1e-6 {
            return v;
        }
    }
}

#[test]
fn absolute_homogeneity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let disk = Domain::unit_ball(2);
    let hs = Domain::half_space_x1(2);
    let evaluators = vec![
        MetricEvaluator::new(MetricKind::BeltramiKlein, disk.clone()).unwrap(),
        MetricEvaluator::new(MetricKind::KobayashiHilbert, disk.clone()).unwrap(),
        MetricEvaluator::new(MetricKind::QuasiHyperbolic { k: 1 }, disk.clone()).unwrap(),
        MetricEvaluator::new(MetricKind::HalfSpaceMinimal, hs).unwrap(),
    ];
    for ev in &evaluators {
        for _ in 0..300 {
            let x = match ev.domain() {
                Domain::HalfSpace(_) => {
                    point(&[rng.gen_range(0.05..2.0), rng.gen_range(-2.0..2.0)])
                }
                _ => random_in_ball(&mut rng, 2, 0.97),
            };
            let v = random_vector(&mut rng, 2);
            let t: f64 = rng.gen_range(-10.0..10.0);
            let lhs = ev.evaluate(&x, &(t * &v)).unwrap();
            let rhs = t.abs() * ev.evaluate(&x, &v).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0),
                "homogeneity: {lhs} vs {rhs}"
            );
        }
    }
    // Funk is positively homogeneous only
    let funk = MetricEvaluator::new(MetricKind::Funk, Domain::unit_ball(2)).unwrap();
    let x = point(&[0.5, 0.0]);
    let v = point(&[1.0, 0.0]);
    let plus = funk.evaluate(&x, &v).unwrap();
    let twice = funk.evaluate(&x, &(2.0 * &v)).unwrap();
    assert!((twice - 2.0 * plus).abs() <= 1e-12);
    assert!(!funk.symmetric());
}

#[test]
fn symmetry_of_symmetric_kinds() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let disk = Domain::unit_ball(2);
    for kind in [
        MetricKind::BeltramiKlein,
        MetricKind::KobayashiHilbert,
        MetricKind::QuasiHyperbolic { k: 1 },
    ] {
        let ev = MetricEvaluator::new(kind, disk.clone()).unwrap();
        assert!(ev.symmetric());
        for _ in 0..100 {
            let x = random_in_ball(&mut rng, 2, 0.95);
            let v = random_vector(&mut rng, 2);
            let a = ev.evaluate(&x, &v).unwrap();
            let b = ev.evaluate(&x, &(-&v)).unwrap();
            assert!((a - b).abs() <= 1e-14 * a.max(1.0));
        }
    }
}

#[test]
fn kobayashi_hilbert_coincides_with_beltrami_klein_on_balls() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (center, radius) in [(point(&[0.0, 0.0, 0.0]), 1.0), (point(&[0.4, -0.1, 0.2]), 1.9)] {
        let ball = Domain::ball(center.clone(), radius).unwrap();
        for _ in 0..500 {
            let x = &center + random_in_ball(&mut rng, 3, 0.98 * radius);
            let v = random_vector(&mut rng, 3);
            let kh = kobayashi_hilbert(&ball, &x, &v).unwrap();
            let bk = beltrami_klein(&ball, &x, &v).unwrap();
            assert!(
                (kh - bk).abs() <= 1e-9 * bk.max(1e-12),
                "kh {kh} vs bk {bk}"
            );
        }
    }
}

#[test]
fn domain_inclusion_decreases_the_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let small = Domain::unit_ball(2);
    let large = Domain::ball(point(&[0.0, 0.0]), 2.0).unwrap();
    for _ in 0..500 {
        let x = random_in_ball(&mut rng, 2, 0.97);
        let v = random_vector(&mut rng, 2);
        let in_small = kobayashi_hilbert(&small, &x, &v).unwrap();
        let in_large = kobayashi_hilbert(&large, &x, &v).unwrap();
        assert!(in_large <= in_small + 1e-12);
    }
}

#[test]
fn q_k_is_monotone_in_k() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let domains = vec![
        Domain::ellipsoid_from_semi_axes(point(&[0.0; 3]), &[1.0, 0.8, 0.5]).unwrap(),
        Domain::cube(3, 0.6).unwrap(),
        Domain::ellipsoid_from_semi_axes(point(&[0.0; 4]), &[1.0, 0.9, 0.7, 0.5]).unwrap(),
    ];
    for domain in &domains {
        let d = domain.dim();
        for s in 0..25 {
            let x = loop {
                let c = random_in_ball(&mut rng, d, 0.9);
                if domain.contains(&c).unwrap() {
                    break c;
                }
            };
            let v = random_vector(&mut rng, d);
            let opts = DeltaKOptions::fast(s as u64);
            let qs: Vec<f64> = (1..=d)
                .map(|k| {
                    q_from_delta(&v, delta_k_numeric(domain, &x, &v, k, &opts).unwrap().value)
                })
                .collect();
            for w in qs.windows(2) {
                assert!(
                    w[1] >= w[0] * (1.0 - 1e-5),
                    "monotonicity in k violated: {qs:?} on {}",
                    domain.kind_name()
                );
            }
        }
    }
}

#[test]
fn half_space_qk_exactness_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for d in [3usize, 4] {
        let hs = Domain::half_space_x1(d);
        for k in 2..d {
            for s in 0..40 {
                let mut x = Vector::zeros(d);
                x[0] = rng.gen_range(0.05..2.0);
                for i in 1..d {
                    x[i] = rng.gen_range(-2.0..2.0);
                }
                let mut v = random_vector(&mut rng, d);
                if v[0].abs() < 1e-6 {
                    v[0] = 1e-3;
                }
                let opts = DeltaKOptions::fast(s as u64);
                let numeric =
                    q_from_delta(&v, delta_k_numeric(&hs, &x, &v, k, &opts).unwrap().value);
                let exact = half_space_qk_closed_form(&x, &v, k).unwrap();
                assert!(
                    (numeric - exact).abs() <= 1e-6 * exact.max(1e-12),
                    "d={d} k={k}: {numeric} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn ball_qk_equals_q1_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (d, ks) in [(3usize, vec![2usize]), (4, vec![2, 3])] {
        let ball = Domain::unit_ball(d);
        for &k in &ks {
            for s in 0..30 {
                let x = random_in_ball(&mut rng, d, 0.95);
                let v = random_vector(&mut rng, d);
                let opts = DeltaKOptions::fast(s as u64);
                let numeric =
                    q_from_delta(&v, delta_k_numeric(&ball, &x, &v, k, &opts).unwrap().value);
                let exact = q_from_delta(&v, ball.line_boundary_distance(&x, &v).unwrap());
                assert!(
                    (numeric - exact).abs() <= 1e-5 * exact.max(1e-12),
                    "d={d} k={k}: {numeric} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn ball_metric_sits_in_the_two_sided_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for radius in [0.5, 1.0, 2.0] {
        let ball = Domain::ball(point(&[0.0, 0.0, 0.0]), radius).unwrap();
        for _ in 0..2000 {
            let x = random_in_ball(&mut rng, 3, 0.999 * radius);
            if x.norm() < 1e-6 {
                continue;
            }
            let v = random_vector(&mut rng, 3);
            let frame = ball.boundary_frame(&x).unwrap();
            let vn = frame.normal_norm(&v);
            let vt = frame.tangential_norm(&v);
            let ck = beltrami_klein(&ball, &x, &v).unwrap();
            let lower = ball_lower_bound_expr(radius, frame.delta, vn, vt);
            let upper = ball_upper_bound_expr(radius, frame.delta, vn, vt);
            assert!(
                lower <= ck + 1e-10 * ck.max(1.0) && ck <= upper + 1e-10 * upper.max(1.0),
                "r={radius}: {lower} <= {ck} <= {upper}"
            );
        }
    }
}

#[test]
fn delta_k_growth_is_bounded_near_strongly_convex_boundary() {
    // on a strongly convex ellipsoid delta_2 / sqrt(delta) stays bounded
    // along a ladder approaching the boundary, and stabilizes under
    // refinement of the ladder
    let ell = Domain::ellipsoid_from_semi_axes(point(&[0.0; 3]), &[1.0, 0.8, 0.5]).unwrap();
    let dir = point(&[1.0, 0.6, 0.2]).normalize();
    let exit = ell
        .ray_boundary_distance(&point(&[0.0; 3]), &dir)
        .unwrap();
    let v = point(&[0.1, 1.0, -0.3]);
    let opts = DeltaKOptions::fast(0);
    let ratio_at = |depth: f64| -> f64 {
        let x = (exit - depth) * &dir;
        let delta = ell.boundary_distance(&x).unwrap();
        let d2 = delta_k_numeric(&ell, &x, &v, 2, &opts).unwrap().value;
        d2 / delta.sqrt()
    };
    let coarse: Vec<f64> = (1..=6).map(|j| ratio_at(0.2f64.powi(j))).collect();
    let fine: Vec<f64> = (7..=10).map(|j| ratio_at(0.2f64.powi(j))).collect();
    let coarse_max = coarse.iter().cloned().fold(0.0f64, f64::max);
    let fine_max = fine.iter().cloned().fold(0.0f64, f64::max);
    assert!(coarse_max.is_finite() && fine_max.is_finite());
    // refinement does not blow the ratio up
    assert!(
        fine_max <= 2.0 * coarse_max,
        "ratio grows under refinement: {coarse:?} then {fine:?}"
    );
}

#[test]
fn qk_evaluator_matches_direct_functions() {
    let ball = Domain::unit_ball(3);
    let opts = DeltaKOptions::default();
    let ev = MetricEvaluator::new(MetricKind::QuasiHyperbolic { k: 2 }, ball.clone())
        .unwrap()
        .with_delta_k_options(opts.clone());
    let x = point(&[0.5, 0.0, 0.0]);
    let v = point(&[0.0, 1.0, 0.0]);
    let via_evaluator = ev.evaluate(&x, &v).unwrap();
    let via_fn = q_from_delta(&v, delta_k(&ball, &x, &v, 2, &opts).unwrap());
    assert!((via_evaluator - via_fn).abs() <= 1e-14);
    assert_eq!(ev.evaluate(&x, &Vector::zeros(3)).unwrap(), 0.0);
}
