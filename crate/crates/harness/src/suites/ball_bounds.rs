//! Two-sided bracket of the ball metric, agreement of the Funk
//! symmetrization with the closed form, and the tangent-ball upper
//! estimate.

use finsler_core::error::{Error, Result};
use finsler_core::geometry::Domain;
use finsler_core::metrics::{
    ball_lower_bound_expr, ball_upper_bound_expr, beltrami_klein, kobayashi_hilbert,
    tangent_ball_upper_bound,
};
use rand::Rng;
use std::time::Instant;

use super::{random_vector, suite_rng};
use crate::config::ExperimentConfig;
use crate::coverage::claims_for;
use crate::report::{CheckResult, VerificationReport};
use crate::tolerances;

pub fn ball_bounds(cfg: &ExperimentConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let domain = cfg
        .domain
        .clone()
        .unwrap_or_else(|| Domain::unit_ball(3));
    let Domain::Ball(ball) = &domain else {
        return Err(Error::Unsupported(
            "ball_bounds runs on ball domains".into(),
        ));
    };
    let radius = ball.radius;
    let center = ball.center.clone();
    let d = domain.dim();
    let mut rng = suite_rng(cfg, 0xba11);

    // bracket check
    let bracket_samples = cfg.samples(10_000);
    let bracket_tol = cfg.tol("bk-within-two-sided-bracket", tolerances::BALL_BRACKET);
    let mut bracket_violation: f64 = 0.0;
    for _ in 0..bracket_samples {
        let x = loop {
            let c = super::random_unit(&mut rng, d) * rng.gen_range(0.0..radius);
            let dist = c.norm();
            if dist > 1e-9 && dist < radius {
                break &center + c;
            }
        };
        let v = random_vector(&mut rng, d);
        let frame = domain.boundary_frame(&x)?;
        let ck = beltrami_klein(&domain, &x, &v)?;
        let lower = ball_lower_bound_expr(radius, frame.delta, frame.normal_norm(&v), frame.tangential_norm(&v));
        let upper = ball_upper_bound_expr(radius, frame.delta, frame.normal_norm(&v), frame.tangential_norm(&v));
        let scale = ck.abs().max(1.0);
        bracket_violation = bracket_violation
            .max((lower - ck) / scale)
            .max((ck - upper) / scale);
    }
    let bracket = CheckResult::new(
        "bk-within-two-sided-bracket",
        bracket_samples,
        bracket_violation.max(0.0),
        bracket_tol,
    )
    .with_note("violation measured relative to max(metric, 1)");

    // Funk symmetrization equals the ball closed form
    let kh_samples = cfg.samples(1000);
    let kh_tol = cfg.tol("kh-equals-bk", tolerances::CLOSED_FORM_MATCH);
    let mut kh_violation: f64 = 0.0;
    for _ in 0..kh_samples {
        let x = &center + super::random_unit(&mut rng, d) * rng.gen_range(0.0..0.995 * radius);
        let v = random_vector(&mut rng, d);
        let kh = kobayashi_hilbert(&domain, &x, &v)?;
        let bk = beltrami_klein(&domain, &x, &v)?;
        kh_violation = kh_violation.max((kh - bk).abs() / bk.abs().max(1e-12));
    }
    let kh = CheckResult::new("kh-equals-bk", kh_samples, kh_violation, kh_tol);

    // tangent ball: with eps = r the tangent ball at the foot is the domain
    // itself, and the displayed bound expressions dominate it
    let tangent_samples = cfg.samples(2000);
    let tangent_tol = cfg.tol("tangent-ball-upper-estimate", tolerances::BALL_BRACKET);
    let mut tangent_violation: f64 = 0.0;
    for _ in 0..tangent_samples {
        let rho = rng.gen_range(0.1 * radius..0.999 * radius);
        let x = &center + super::random_unit(&mut rng, d) * rho;
        let v = random_vector(&mut rng, d);
        let frame = domain.boundary_frame(&x)?;
        let tb = tangent_ball_upper_bound(&frame, &v, radius)?;
        let bk = beltrami_klein(&domain, &x, &v)?;
        let scale = bk.abs().max(1.0);
        tangent_violation = tangent_violation.max((tb - bk).abs() / scale);
        let upper = ball_upper_bound_expr(
            radius,
            frame.delta,
            frame.normal_norm(&v),
            frame.tangential_norm(&v),
        );
        tangent_violation = tangent_violation.max((tb - upper) / upper.abs().max(1.0));
    }
    let tangent = CheckResult::new(
        "tangent-ball-upper-estimate",
        tangent_samples,
        tangent_violation.max(0.0),
        tangent_tol,
    )
    .with_note("tangent ball of radius r at the foot reproduces the ball metric and sits below the bracket");

    Ok(VerificationReport::new(
        "ball_bounds",
        cfg.seed,
        vec![bracket, kh, tangent],
        &claims_for("ball_bounds"),
        start.elapsed().as_secs_f64(),
    ))
}
