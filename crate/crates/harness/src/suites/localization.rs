//! Strong localization of the Kobayashi-Hilbert metric near a strictly
//! convex boundary point: the metric of `D ∩ U` exceeds the metric of `D`
//! by at most a factor `1 + C delta`, with `C` fitted along a depth ladder.

use finsler_core::error::{Error, Result};
use finsler_core::geometry::{Domain, Point, Vector};
use finsler_core::metrics::{kobayashi_hilbert, kobayashi_hilbert_intersection};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

use super::{random_vector, suite_rng};
use crate::config::ExperimentConfig;
use crate::coverage::claims_for;
use crate::report::{CheckResult, VerificationReport};
use crate::tolerances;

fn default_domain() -> Domain {
    // long ellipse: semi-axes (1, 1/4); the flat-end vertex has curvature
    // radius 4, so collars there are comfortably inside the reach
    Domain::ellipsoid_from_semi_axes(Point::zeros(2), &[1.0, 0.25]).expect("ellipse")
}

/// The flat-end vertex of the default domain (last axis direction).
fn strictly_convex_point(domain: &Domain) -> Result<Point> {
    let d = domain.dim();
    let center = domain.interior_reference();
    let mut dir = Vector::zeros(d);
    dir[d - 1] = 1.0;
    let t = domain.ray_boundary_distance(&center, &dir)?;
    if !t.is_finite() {
        return Err(Error::Unsupported(
            "localization needs a bounded direction to pick the base point".into(),
        ));
    }
    Ok(&center + t * dir)
}

struct LadderSample {
    depth: f64,
    ratio_minus_one_over_delta: f64,
}

pub fn localization(cfg: &ExperimentConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let domain = cfg.domain.clone().unwrap_or_else(default_domain);
    if !domain.is_convex() {
        return Err(Error::Unsupported("localization needs a convex domain".into()));
    }
    let mut rng = suite_rng(cfg, 0x10c4);
    let mut checks = Vec::new();

    let xi = strictly_convex_point(&domain)?;
    let u_radius = 0.3;
    let chart = 0.08;
    let collar = cfg.collar_or(0.05);
    let neighborhood = Domain::ball(xi.clone(), u_radius)?;

    // depth ladder: fit C on each rung
    let rungs = 9;
    let per_rung = cfg.samples(200).max(20);
    let mut samples: Vec<LadderSample> = Vec::new();
    let mut inclusion_violation: f64 = 0.0;
    for j in 0..rungs {
        let depth_scale = collar * 0.5f64.powi(j);
        for _ in 0..per_rung {
            let (x, v, delta) = collar_sample(&domain, &xi, chart, depth_scale, &mut rng)?;
            let base = kobayashi_hilbert(&domain, &x, &v)?;
            let localized = kobayashi_hilbert_intersection(&domain, &neighborhood, &x, &v)?;
            if base <= 0.0 {
                continue;
            }
            let ratio = localized / base;
            inclusion_violation = inclusion_violation.max(1.0 - ratio);
            samples.push(LadderSample {
                depth: delta,
                ratio_minus_one_over_delta: (ratio - 1.0).max(0.0) / delta,
            });
        }
    }
    let mid = collar * 0.5f64.powi(rungs / 2);
    let coarse_c = samples
        .iter()
        .filter(|s| s.depth >= mid)
        .map(|s| s.ratio_minus_one_over_delta)
        .fold(0.0f64, f64::max);
    let fine_c = samples
        .iter()
        .filter(|s| s.depth < mid)
        .map(|s| s.ratio_minus_one_over_delta)
        .fold(0.0f64, f64::max);
    let fitted_c = coarse_c.max(fine_c);
    let growth_violation = (fine_c - tolerances::LADDER_GROWTH_FACTOR * coarse_c).max(0.0);
    checks.push(
        CheckResult::new(
            "localization-constant-bounded",
            samples.len(),
            growth_violation,
            cfg.tol("localization-constant-bounded", 1e-9),
        )
        .with_fit("C", fitted_c)
        .with_fit("C_coarse_half", coarse_c)
        .with_fit("C_fine_half", fine_c)
        .with_note("C fitted from (ratio - 1)/delta; fails only if the fine half of the ladder blows up"),
    );

    checks.push(CheckResult::new(
        "inclusion-never-decreases-metric",
        samples.len(),
        inclusion_violation.max(0.0),
        cfg.tol("inclusion-never-decreases-metric", tolerances::RATIO_ONE),
    ));

    // chords leaving through the outer boundary on both sides: ratio one
    {
        let mut worst: f64 = 0.0;
        let mut used = 0usize;
        for _ in 0..cfg.samples(400) {
            let (x, _, _) = collar_sample(&domain, &xi, chart, 0.002, &mut rng)?;
            // nearly tangential directions exit through the boundary close by
            let n = domain.boundary_frame(&x)?.normal;
            let mut v = random_vector(&mut rng, domain.dim());
            let vn = v.dot(&n);
            v -= vn * &n;
            if v.norm() < 1e-9 {
                continue;
            }
            let u = v.normalize();
            let both_exit_domain = {
                let fwd_d = domain.ray_boundary_distance(&x, &u)?;
                let fwd_u = neighborhood.ray_boundary_distance(&x, &u)?;
                let back_d = domain.ray_boundary_distance(&x, &(-&u))?;
                let back_u = neighborhood.ray_boundary_distance(&x, &(-&u))?;
                fwd_d < fwd_u && back_d < back_u
            };
            if !both_exit_domain {
                continue;
            }
            used += 1;
            let base = kobayashi_hilbert(&domain, &x, &u)?;
            let localized = kobayashi_hilbert_intersection(&domain, &neighborhood, &x, &u)?;
            worst = worst.max((localized / base - 1.0).abs());
        }
        checks.push(
            CheckResult::new(
                "outer-chords-give-ratio-one",
                used,
                worst,
                cfg.tol("outer-chords-give-ratio-one", tolerances::RATIO_ONE),
            )
            .with_note("when both chord exits lie on the outer boundary the metrics agree exactly"),
        );
    }

    // a ball inside a superset neighborhood: C = 0
    {
        let disk = Domain::unit_ball(2);
        let superset = Domain::ball(Point::zeros(2), 2.0)?;
        let mut worst: f64 = 0.0;
        let n = cfg.samples(300);
        for _ in 0..n {
            let x = loop {
                let c = Vector::from_fn(2, |_, _| rng.gen_range(-1.0..1.0));
                if c.norm() < 0.98 {
                    break c;
                }
            };
            let v = random_vector(&mut rng, 2);
            let base = kobayashi_hilbert(&disk, &x, &v)?;
            let localized = kobayashi_hilbert_intersection(&disk, &superset, &x, &v)?;
            worst = worst.max((localized - base).abs() / base.max(1e-12));
        }
        checks.push(
            CheckResult::new(
                "superset-neighborhood-gives-zero-constant",
                n,
                worst,
                cfg.tol(
                    "superset-neighborhood-gives-zero-constant",
                    tolerances::RATIO_ONE,
                ),
            )
            .with_fit("C", 0.0),
        );
    }

    Ok(VerificationReport::new(
        "localization",
        cfg.seed,
        checks,
        &claims_for("localization"),
        start.elapsed().as_secs_f64(),
    ))
}

/// Interior point at a random depth below `depth_scale`, with its boundary
/// distance, near the base boundary point.
fn collar_sample(
    domain: &Domain,
    xi: &Point,
    chart: f64,
    depth_scale: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(Point, Vector, f64)> {
    let d = domain.dim();
    loop {
        let mut offset = Vector::zeros(d);
        for i in 0..d - 1 {
            offset[i] = rng.gen_range(-chart..chart);
        }
        let probe = xi + offset;
        // pull the probe to the boundary along the center ray
        let center = domain.interior_reference();
        let dir = (&probe - &center).normalize();
        let t = domain.ray_boundary_distance(&center, &dir)?;
        if !t.is_finite() {
            continue;
        }
        let foot = &center + t * dir;
        if (&foot - xi).norm() > 2.0 * chart {
            continue;
        }
        let n = domain.outward_normal_at(&foot)?;
        let depth = rng.gen_range(0.1 * depth_scale..depth_scale);
        let x = &foot - depth * n;
        if !domain.contains(&x)? {
            continue;
        }
        let delta = domain.boundary_distance(&x)?;
        let v = random_vector(rng, d);
        return Ok((x, v, delta));
    }
}
