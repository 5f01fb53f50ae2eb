//! The subspace optimizer against its closed-form oracles: the half-space
//! formula `|v_1|/(2 x_1)` for every order below the dimension, the ball
//! order-equality, the full-order quasi-hyperbolic value, order
//! monotonicity, and the half-space minimal metric.

use finsler_core::error::Result;
use finsler_core::geometry::{point, Domain, Vector};
use finsler_core::metrics::{
    delta_k_numeric, half_space_minimal, half_space_qk_closed_form, q_from_delta, DeltaKOptions,
    MetricEvaluator, MetricKind,
};
use rand::Rng;
use rayon::prelude::*;
use std::time::Instant;

use super::{random_vector, suite_rng};
use crate::config::ExperimentConfig;
use crate::coverage::claims_for;
use crate::report::{CheckResult, VerificationReport};
use crate::tolerances;

pub fn halfspace_ball_qk(cfg: &ExperimentConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut rng = suite_rng(cfg, 0x9_04b);

    // half-space exactness for d in {3,4}, every 1 < k < d (k = 1 is the
    // definitional line distance); pre-sampled inputs, parallel optimizer runs
    for d in [3usize, 4] {
        let hs = Domain::half_space_x1(d);
        for k in 2..d {
            let n = cfg.samples(1000);
            let inputs: Vec<(Vector, Vector, u64)> = (0..n)
                .map(|i| {
                    let mut x = Vector::zeros(d);
                    x[0] = rng.gen_range(0.05..2.0);
                    for j in 1..d {
                        x[j] = rng.gen_range(-2.0..2.0);
                    }
                    let mut v = random_vector(&mut rng, d);
                    // keep the closed form finite; tangential slices are
                    // covered by the unbounded-slice check below
                    if v[0].abs() < 1e-6 * v.norm() {
                        v[0] = 1e-3;
                    }
                    (x, v, i as u64)
                })
                .collect();
            let name = format!("halfspace-qk-exactness-d{d}-k{k}");
            let tol = cfg.tol(&name, tolerances::QK_HALFSPACE_REL);
            let results: Vec<Result<(f64, bool)>> = inputs
                .par_iter()
                .map(|(x, v, salt)| {
                    let opts = DeltaKOptions::fast(cfg.seed ^ (salt.wrapping_mul(0x51ed)));
                    let out = delta_k_numeric(&hs, x, v, k, &opts)?;
                    let numeric = q_from_delta(v, out.value);
                    let exact = half_space_qk_closed_form(x, v, k)?;
                    Ok((
                        (numeric - exact).abs() / exact.abs().max(1e-12),
                        out.converged,
                    ))
                })
                .collect();
            let mut worst: f64 = 0.0;
            let mut unconverged = 0usize;
            for r in results {
                let (rel, converged) = r?;
                worst = worst.max(rel);
                if !converged {
                    unconverged += 1;
                }
            }
            checks.push(
                CheckResult::new(name, n, worst, tol)
                    .with_fit("unconverged_runs", unconverged as f64),
            );
        }
    }

    // unbounded slices: tangential vectors give q = 0 through the optimizer
    {
        let hs = Domain::half_space_x1(3);
        let x = point(&[1.0, 0.0, 0.0]);
        let v = point(&[0.0, 1.0, 0.0]);
        let out = delta_k_numeric(&hs, &x, &v, 2, &DeltaKOptions::fast(cfg.seed))?;
        let violation = if out.value.is_infinite() { 0.0 } else { 1.0 };
        checks.push(
            CheckResult::new("halfspace-tangential-slice-unbounded", 1, violation, 0.5)
                .with_note("slice spanned by boundary-parallel directions never exits"),
        );
    }

    // ball order-equality for d = 3, k = 2 (and the larger orders meet the
    // monotonicity check below)
    {
        let d = 3;
        let ball = Domain::unit_ball(d);
        let n = cfg.samples(500);
        let inputs: Vec<(Vector, Vector, u64)> = (0..n)
            .map(|i| {
                let x = loop {
                    let c = Vector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
                    if c.norm() < 0.97 {
                        break c;
                    }
                };
                (x, random_vector(&mut rng, d), i as u64)
            })
            .collect();
        let tol = cfg.tol("ball-qk-order-equality", tolerances::QK_BALL_REL);
        let worst = inputs
            .par_iter()
            .map(|(x, v, salt)| {
                let opts = DeltaKOptions::fast(cfg.seed ^ (salt.wrapping_mul(0xb0a)));
                let numeric = q_from_delta(v, delta_k_numeric(&ball, x, v, 2, &opts)?.value);
                let exact = q_from_delta(v, ball.line_boundary_distance(x, v)?);
                Ok((numeric - exact).abs() / exact.abs().max(1e-12))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0f64, f64::max);
        checks.push(CheckResult::new("ball-qk-order-equality", n, worst, tol));
    }

    // full order k = d is the plain quasi-hyperbolic metric
    {
        let ball = Domain::unit_ball(3);
        let ev = MetricEvaluator::new(MetricKind::QuasiHyperbolic { k: 3 }, ball.clone())?;
        let n = cfg.samples(200);
        let mut worst: f64 = 0.0;
        for _ in 0..n {
            let x = loop {
                let c = Vector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
                if c.norm() < 0.98 {
                    break c;
                }
            };
            let v = random_vector(&mut rng, 3);
            let q = ev.evaluate(&x, &v)?;
            let exact = v.norm() / (2.0 * ball.boundary_distance(&x)?);
            worst = worst.max((q - exact).abs() / exact.max(1e-12));
        }
        checks.push(CheckResult::new(
            "full-order-is-quasihyperbolic",
            n,
            worst,
            cfg.tol("full-order-is-quasihyperbolic", tolerances::EXACT_IDENTITY),
        ));
    }

    // order monotonicity on an ellipsoid and a cube
    {
        let domains = [
            Domain::ellipsoid_from_semi_axes(point(&[0.0; 3]), &[1.0, 0.8, 0.5])?,
            Domain::cube(3, 0.6)?,
        ];
        let n = cfg.samples(50);
        let tol = cfg.tol("qk-monotone-in-order", tolerances::QK_MONOTONE_REL);
        let mut worst: f64 = 0.0;
        for domain in &domains {
            for s in 0..n {
                let x = super::random_interior(domain, &mut rng)?;
                let v = random_vector(&mut rng, 3);
                let opts = DeltaKOptions::fast(cfg.seed ^ s as u64);
                let qs: Vec<f64> = (1..=3)
                    .map(|k| {
                        Ok(q_from_delta(
                            &v,
                            delta_k_numeric(domain, &x, &v, k, &opts)?.value,
                        ))
                    })
                    .collect::<Result<_>>()?;
                for w in qs.windows(2) {
                    if w[1] < w[0] {
                        worst = worst.max((w[0] - w[1]) / w[0].abs().max(1e-12));
                    }
                }
            }
        }
        checks.push(CheckResult::new(
            "qk-monotone-in-order",
            2 * n,
            worst,
            tol,
        ));
    }

    // half-space minimal metric closed form agrees with q_k there
    {
        let n = cfg.samples(200);
        let mut worst: f64 = 0.0;
        for _ in 0..n {
            let x = point(&[rng.gen_range(0.05..2.0), rng.gen_range(-2.0..2.0), 0.0]);
            let v = random_vector(&mut rng, 3);
            let minimal = half_space_minimal(&x, &v)?;
            let qk = half_space_qk_closed_form(&x, &v, 2)?;
            worst = worst.max((minimal - qk).abs() / qk.abs().max(1e-12));
        }
        checks.push(CheckResult::new(
            "halfspace-minimal-equals-qk",
            n,
            worst,
            cfg.tol("halfspace-minimal-equals-qk", tolerances::EXACT_IDENTITY),
        ));
    }

    Ok(VerificationReport::new(
        "halfspace_ball_qk",
        cfg.seed,
        checks,
        &claims_for("halfspace_ball_qk"),
        start.elapsed().as_secs_f64(),
    ))
}
