//! Fit-and-verify of the two-sided intrinsic-distance estimate on a
//! strongly convex domain: sample boundary-collar pairs, take the
//! cross-ratio Hilbert distance as the exact intrinsic distance, and
//! grid-search feasible constants `0 < c2 <= 1 <= C2` with
//! `d_{c2} <= K <= d_{C2}`. Also fits the far-point additive constant, the
//! vertical and horizontal curve-length constants, and checks the bound
//! templates against the ball metric.

use finsler_core::error::{Error, Result};
use finsler_core::geometry::{BoundaryFrame, Domain, Point, Vector};
use finsler_core::intrinsic::{
    equidistant_path, normal_segment_length, path_length, QuadratureRule, QuadratureSpec,
};
use finsler_core::metrics::{
    beltrami_klein, bound_template_eval, hilbert_distance_closed_form, BoundSide, BoundTemplate,
    MetricEvaluator, MetricKind,
};
use finsler_core::quasidist::a_gauge;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

use super::{random_vector, suite_rng};
use crate::config::ExperimentConfig;
use crate::coverage::claims_for;
use crate::report::{CheckResult, VerificationReport};
use crate::tolerances;

/// Grid of candidate constants: dyadic in both directions.
const GRID_EXPONENT_RANGE: i32 = 6; // c2 down to 2^-6, C2 up to 2^6 = 64

fn default_domain() -> Domain {
    // ellipse with semi-axes (1, 1/2)
    Domain::ellipsoid_from_semi_axes(Point::zeros(2), &[1.0, 0.5]).expect("default ellipse")
}

/// Boundary foot near the flattest vertex, offset along the boundary by a
/// parameter, found by casting a ray from the center.
fn foot_near_vertex(domain: &Domain, tangent_offset: f64) -> Result<Point> {
    let d = domain.dim();
    let center = domain.interior_reference();
    let mut dir = Vector::zeros(d);
    dir[d - 1] = 1.0;
    dir[0] = tangent_offset;
    let dir = dir.normalize();
    let t = domain.ray_boundary_distance(&center, &dir)?;
    Ok(&center + t * dir)
}

fn collar_frame(
    domain: &Domain,
    rng: &mut ChaCha8Rng,
    chart: f64,
    depth_range: (f64, f64),
) -> Result<(Point, BoundaryFrame)> {
    let tangent_offset = rng.gen_range(-chart..chart);
    let foot = foot_near_vertex(domain, tangent_offset)?;
    let n = domain.outward_normal_at(&foot)?;
    let depth = rng.gen_range(depth_range.0..depth_range.1);
    let x = &foot - depth * n;
    let frame = domain.boundary_frame(&x)?;
    Ok((x, frame))
}

pub fn sandwich(cfg: &ExperimentConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let domain = cfg.domain.clone().unwrap_or_else(default_domain);
    if !matches!(domain, Domain::Ball(_) | Domain::Ellipsoid(_)) {
        return Err(Error::Unsupported(
            "sandwich runs on strongly convex domains (ball or ellipsoid)".into(),
        ));
    }
    let mut rng = suite_rng(cfg, 0x5a4d);
    let collar = cfg.collar_or(0.05);
    let chart = 0.3;
    let depth_range = (1e-4 * collar.max(1e-6), collar);
    let mut checks = Vec::new();

    // --- the sandwich fit ---
    let pairs = cfg.samples(2000);
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio: f64 = 0.0;
    let mut used = 0usize;
    for _ in 0..pairs {
        let (x, fx) = collar_frame(&domain, &mut rng, chart, depth_range)?;
        let (y, fy) = collar_frame(&domain, &mut rng, chart, depth_range)?;
        let gauge = a_gauge(&fx, &fy);
        if gauge <= 1e-14 {
            continue;
        }
        let k = hilbert_distance_closed_form(&domain, &x, &y)?;
        // d_c <= K <= d_C  <=>  c <= rho and C >= rho, rho = (e^{K/2}-1)/a
        let rho = (0.5 * k).exp_m1() / gauge;
        min_ratio = min_ratio.min(rho);
        max_ratio = max_ratio.max(rho);
        used += 1;
    }
    let floor = 2.0f64.powi(-GRID_EXPONENT_RANGE);
    let ceil = 2.0f64.powi(GRID_EXPONENT_RANGE);
    let c2_grid = {
        let mut c = 1.0f64;
        while c > min_ratio && c > floor * 0.5 {
            c *= 0.5;
        }
        c
    };
    let c2_feasible = c2_grid <= min_ratio && c2_grid >= floor * 0.999;
    let c2_grid = c2_grid.min(1.0);
    let big_c2_grid = {
        let mut c = 1.0f64;
        while c < max_ratio && c < ceil * 2.0 {
            c *= 2.0;
        }
        c
    };
    let big_feasible = big_c2_grid >= max_ratio && big_c2_grid <= ceil * 1.001;
    let feasible = c2_feasible && big_feasible && used > 0;
    let mut check = CheckResult::new(
        "sandwich-grid-feasible",
        used,
        if feasible { 0.0 } else { 1.0 },
        0.5,
    )
    .with_fit("c2_exact", min_ratio)
    .with_fit("C2_exact", max_ratio)
    .with_fit("c2_grid", c2_grid)
    .with_fit("C2_grid", big_c2_grid)
    .with_note(format!(
        "collar {collar}, grid 2^-{GRID_EXPONENT_RANGE}..2^{GRID_EXPONENT_RANGE}"
    ));
    if !feasible {
        check = check.with_note(format!(
            "infeasible: ratio range [{min_ratio:.3e}, {max_ratio:.3e}] leaves the grid"
        ));
    }
    checks.push(check);

    // --- far-point corollary: escaping the collar neighborhood costs at
    // least log(1/delta)/2 - B ---
    {
        let n = cfg.samples(300);
        let mut fitted_b: f64 = 0.0;
        let far_reference = domain.interior_reference();
        for _ in 0..n {
            let (x, fx) = collar_frame(&domain, &mut rng, chart, depth_range)?;
            // far points: pulled toward the center, outside the collar chart
            let y = &far_reference
                + rng.gen_range(0.0..0.3) * super::random_unit(&mut rng, domain.dim());
            if !domain.contains(&y)? {
                continue;
            }
            let k = hilbert_distance_closed_form(&domain, &x, &y)?;
            let needed = 0.5 * (1.0 / fx.delta).ln() - k;
            fitted_b = fitted_b.max(needed);
        }
        checks.push(
            CheckResult::fit_only("far-point-lower-bound", n)
                .with_fit("B", fitted_b.max(0.0))
                .with_note("smallest additive constant making the escape bound hold"),
        );
    }

    // --- vertical lemma: fiber lengths against |log(h1/h2)| ---
    {
        let metric = MetricEvaluator::new(MetricKind::KobayashiHilbert, domain.clone())?;
        let quad = QuadratureSpec::new(QuadratureRule::Gauss5, 128)?;
        let mut fitted_b: f64 = 0.0;
        let n = 12;
        for i in 0..n {
            let foot = foot_near_vertex(&domain, -chart + 2.0 * chart * (i as f64) / n as f64)?;
            let frame = domain.boundary_frame(&(foot.clone() - collar * domain.outward_normal_at(&foot)?))?;
            let (d1, d2) = (0.02 * collar, collar);
            let len = normal_segment_length(&metric, &frame, d1, d2, &quad)?;
            let log_form = 0.5 * (d2 / d1).ln();
            fitted_b = fitted_b.max((len - log_form).abs());
        }
        checks.push(
            CheckResult::fit_only("vertical-fiber-log-form", n)
                .with_fit("B", fitted_b)
                .with_note("max |fiber length - |log(h1/h2)|| over sampled fibers"),
        );
    }

    // --- horizontal lemma: inward-offset boundary paths ---
    {
        let metric = MetricEvaluator::new(MetricKind::KobayashiHilbert, domain.clone())?;
        let quad = QuadratureSpec::new(QuadratureRule::Gauss5, 16)?;
        let mut fitted_a: f64 = 0.0;
        let mut count = 0usize;
        for j in 0..3 {
            let delta0 = collar * 0.5f64.powi(j);
            let fa = domain.boundary_frame(&{
                let foot = foot_near_vertex(&domain, -0.5 * chart)?;
                foot.clone() - delta0 * domain.outward_normal_at(&foot)?
            })?;
            let fb = domain.boundary_frame(&{
                let foot = foot_near_vertex(&domain, 0.5 * chart)?;
                foot.clone() - delta0 * domain.outward_normal_at(&foot)?
            })?;
            let path = equidistant_path(&domain, &fa, &fb, delta0, 48)?;
            let len = path_length(&metric, &path, &quad)?;
            let feet = (&fa.foot - &fb.foot).norm();
            fitted_a = fitted_a.max(len * delta0.sqrt() / feet);
            count += 1;
        }
        checks.push(
            CheckResult::fit_only("equidistant-path-form", count)
                .with_fit("A", fitted_a)
                .with_note("max length * sqrt(delta0) / |feet| over a depth ladder"),
        );
    }

    // --- bound templates bracket the ball metric ---
    {
        let ball = Domain::unit_ball(domain.dim());
        let lower = BoundTemplate::new(0.0, 1.0, std::f64::consts::FRAC_1_SQRT_2, 1.0)?;
        let upper = BoundTemplate::new(1.5, 1.0, 1.0, 1.0)?;
        let n = cfg.samples(2000);
        let tol = cfg.tol("bound-template-brackets-ball-metric", tolerances::BALL_BRACKET);
        let mut violation: f64 = 0.0;
        for _ in 0..n {
            let rho = rng.gen_range(0.55..0.999);
            let x = super::random_unit(&mut rng, domain.dim()) * rho;
            let v = random_vector(&mut rng, domain.dim());
            let frame = ball.boundary_frame(&x)?;
            let bk = beltrami_klein(&ball, &x, &v)?;
            let lo = bound_template_eval(&lower, BoundSide::Lower, &frame, &v)?;
            let hi = bound_template_eval(&upper, BoundSide::Upper, &frame, &v)?;
            let scale = bk.abs().max(1.0);
            violation = violation.max((lo - bk) / scale).max((bk - hi) / scale);
        }
        checks.push(
            CheckResult::new(
                "bound-template-brackets-ball-metric",
                n,
                violation.max(0.0),
                tol,
            )
            .with_note("lower(0,1,1/sqrt2,1) and upper(1.5,1,1,1) templates on the unit ball"),
        );
    }

    Ok(VerificationReport::new(
        "sandwich",
        cfg.seed,
        checks,
        &claims_for("sandwich"),
        start.elapsed().as_secs_f64(),
    ))
}
