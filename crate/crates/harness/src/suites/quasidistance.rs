//! Properties of the boundary quasi-distance family: monotone in the
//! parameter, a true distance for `c >= 1`, a quasi-distance always, plus
//! the frame invariants it relies on.

use finsler_core::error::Result;
use finsler_core::geometry::{BoundaryFrame, Domain, Point};
use finsler_core::quasidist::{d_c, quasi_triangle_constant, QuasiDistanceParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

use super::{random_unit, suite_rng};
use crate::config::ExperimentConfig;
use crate::coverage::claims_for;
use crate::report::{CheckResult, VerificationReport};
use crate::tolerances;

fn default_domain() -> Domain {
    Domain::ellipsoid_from_semi_axes(Point::zeros(3), &[1.0, 0.8, 0.6]).expect("ellipsoid")
}

/// Interior point in a boundary collar with its frame.
fn collar_frame(
    domain: &Domain,
    rng: &mut ChaCha8Rng,
    collar: f64,
) -> Result<(Point, BoundaryFrame)> {
    let center = domain.interior_reference();
    loop {
        let dir = random_unit(rng, domain.dim());
        let t = domain.ray_boundary_distance(&center, &dir)?;
        if !t.is_finite() {
            continue;
        }
        let foot = &center + t * &dir;
        let n = domain.outward_normal_at(&foot)?;
        let depth = rng.gen_range(1e-4 * collar..collar);
        let x = &foot - depth * n;
        if let Ok(frame) = domain.boundary_frame(&x) {
            return Ok((x, frame));
        }
    }
}

pub fn quasidistance(cfg: &ExperimentConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let domain = cfg.domain.clone().unwrap_or_else(default_domain);
    let collar = cfg.collar_or(0.1);
    let mut rng = suite_rng(cfg, 0xd157);
    let mut checks = Vec::new();

    // pool of collar frames reused across the checks
    let pool_size = 200;
    let mut pool: Vec<(Point, BoundaryFrame)> = Vec::with_capacity(pool_size);
    for _ in 0..pool_size {
        pool.push(collar_frame(&domain, &mut rng, collar)?);
    }

    // triangle inequality for c in {1, 2} over random triples
    for c in [1.0, 2.0] {
        let params = QuasiDistanceParams::new(c)?;
        let triples = cfg.samples(10_000);
        let name = format!("triangle-inequality-c{c}");
        let tol = cfg.tol(&name, tolerances::EXACT_IDENTITY);
        let mut violation: f64 = 0.0;
        for _ in 0..triples {
            let i = rng.gen_range(0..pool.len());
            let j = rng.gen_range(0..pool.len());
            let m = rng.gen_range(0..pool.len());
            if i == j || j == m || i == m {
                continue;
            }
            let dxy = d_c(params, &pool[i].1, &pool[j].1);
            let dxz = d_c(params, &pool[i].1, &pool[m].1);
            let dzy = d_c(params, &pool[m].1, &pool[j].1);
            violation = violation.max((dxy - dxz - dzy) / dxy.max(1.0));
        }
        checks.push(CheckResult::new(name, triples, violation.max(0.0), tol));
    }

    // monotonicity chain d_{c1} <= d_{c2} <= (c2/c1) d_{c1}
    {
        let n = cfg.samples(2000);
        let tol = cfg.tol("parameter-monotonicity", tolerances::EXACT_IDENTITY);
        let mut violation: f64 = 0.0;
        let chains = [(0.25, 0.5), (0.5, 1.0), (1.0, 2.0), (0.25, 2.0)];
        for _ in 0..n {
            let i = rng.gen_range(0..pool.len());
            let j = rng.gen_range(0..pool.len());
            if i == j {
                continue;
            }
            for (c1, c2) in chains {
                let d1 = d_c(QuasiDistanceParams::new(c1)?, &pool[i].1, &pool[j].1);
                let d2 = d_c(QuasiDistanceParams::new(c2)?, &pool[i].1, &pool[j].1);
                let scale = d2.max(1.0);
                violation = violation
                    .max((d1 - d2) / scale)
                    .max((d2 - (c2 / c1) * d1) / scale);
            }
        }
        checks.push(CheckResult::new(
            "parameter-monotonicity",
            n,
            violation.max(0.0),
            tol,
        ));
    }

    // symmetry and point separation
    {
        let n = cfg.samples(2000);
        let tol = cfg.tol("symmetry-and-identity", tolerances::EXACT_IDENTITY);
        let params = QuasiDistanceParams::new(1.0)?;
        let mut violation: f64 = 0.0;
        for _ in 0..n {
            let i = rng.gen_range(0..pool.len());
            let j = rng.gen_range(0..pool.len());
            let dij = d_c(params, &pool[i].1, &pool[j].1);
            let dji = d_c(params, &pool[j].1, &pool[i].1);
            violation = violation.max((dij - dji).abs());
            if i == j {
                violation = violation.max(dij.abs());
            } else if (&pool[i].0 - &pool[j].0).norm() > 1e-9 {
                // distinct points separate
                if dij <= 0.0 {
                    violation = violation.max(1.0);
                }
            }
        }
        checks.push(CheckResult::new(
            "symmetry-and-identity",
            n,
            violation,
            tol,
        ));
    }

    // empirical quasi-triangle constants, including c < 1
    {
        let frames: Vec<BoundaryFrame> = pool.iter().take(48).map(|(_, f)| f.clone()).collect();
        let mut check = CheckResult::fit_only("quasi-triangle-constants", frames.len());
        for c in [0.25, 0.5, 1.0, 2.0] {
            let constant = quasi_triangle_constant(QuasiDistanceParams::new(c)?, &frames)?;
            check = check.with_fit(format!("A_c{c}"), constant);
        }
        checks.push(check.with_note(
            "largest ratio d(x,y)/(d(x,z)+d(z,y)) over all triples; at most one means the triangle inequality held",
        ));
    }

    // frame invariants behind the gauge: reconstruction and unit normals
    {
        let tol = cfg.tol("frame-reconstruction", 1e-8);
        let mut violation: f64 = 0.0;
        for (x, frame) in &pool {
            violation = violation.max((frame.point() - x).norm());
            violation = violation.max((frame.normal.norm() - 1.0).abs());
            violation = violation.max((frame.h * frame.h - frame.delta).abs());
        }
        checks.push(CheckResult::new(
            "frame-reconstruction",
            pool.len(),
            violation,
            tol,
        ));
    }

    Ok(VerificationReport::new(
        "quasidistance",
        cfg.seed,
        checks,
        &claims_for("quasidistance"),
        start.elapsed().as_secs_f64(),
    ))
}
