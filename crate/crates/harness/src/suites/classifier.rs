//! The boundary convexity classifier on a catalog of surfaces with known
//! tangential Hessian spectra, the logical implications between the
//! convexity notions, and boundedness of `delta_k / sqrt(delta)` at
//! strongly convex boundaries.

use finsler_core::error::Result;
use finsler_core::geometry::{point, Domain, ImplicitBuiltin, ImplicitSmooth, Point};
use finsler_core::metrics::{classify_boundary_point, delta_k_numeric, DeltaKOptions};
use std::time::Instant;

use crate::config::ExperimentConfig;
use crate::coverage::claims_for;
use crate::report::{CheckResult, VerificationReport};
use crate::tolerances;

struct CatalogEntry {
    label: &'static str,
    domain: Domain,
    at: Point,
    expected_eigenvalues: Vec<f64>,
    eig_tol: f64,
    strongly_convex: bool,
    two_strongly_convex: bool,
    minimally_convex: bool,
}

fn catalog() -> Result<Vec<CatalogEntry>> {
    let sphere = ImplicitSmooth::new(
        ImplicitBuiltin::EllipsoidLevelSet {
            center: vec![0.0; 3],
            semi_axes: vec![1.0; 3],
        },
        3,
        1.5,
        true,
    )?;
    let cylinder = ImplicitSmooth::new(
        ImplicitBuiltin::CylinderLevelSet {
            radius: 1.0,
            round_dims: 2,
        },
        3,
        5.0,
        true,
    )?;
    Ok(vec![
        CatalogEntry {
            label: "unit-sphere-analytic",
            domain: Domain::implicit(sphere.clone()),
            at: point(&[0.0, 0.0, 1.0]),
            expected_eigenvalues: vec![2.0, 2.0],
            eig_tol: tolerances::CLASSIFIER_EIG,
            strongly_convex: true,
            two_strongly_convex: true,
            minimally_convex: true,
        },
        CatalogEntry {
            label: "unit-sphere-finite-difference",
            domain: Domain::implicit(sphere.with_fd_derivatives(true)),
            at: point(&[0.0, 0.0, 1.0]),
            expected_eigenvalues: vec![2.0, 2.0],
            // central differences with step 1e-5 resolve the Hessian to ~1e-5
            eig_tol: 1e-4,
            strongly_convex: true,
            two_strongly_convex: true,
            minimally_convex: true,
        },
        CatalogEntry {
            label: "cylinder-flat-direction",
            domain: Domain::implicit(cylinder),
            at: point(&[1.0, 0.0, 0.0]),
            expected_eigenvalues: vec![0.0, 2.0],
            eig_tol: tolerances::CLASSIFIER_EIG,
            strongly_convex: false,
            two_strongly_convex: true,
            minimally_convex: true,
        },
        CatalogEntry {
            label: "half-space-affine",
            domain: Domain::half_space_x1(3),
            at: point(&[0.0, 0.7, -0.3]),
            expected_eigenvalues: vec![0.0, 0.0],
            eig_tol: tolerances::CLASSIFIER_EIG,
            strongly_convex: false,
            two_strongly_convex: false,
            minimally_convex: false,
        },
        CatalogEntry {
            label: "ellipsoid-vertex",
            domain: Domain::ellipsoid_from_semi_axes(Point::zeros(3), &[1.0, 0.8, 0.5])?,
            at: point(&[1.0, 0.0, 0.0]),
            // 2 S^{-1} restricted to the tangent plane: 2/0.64 and 2/0.25
            expected_eigenvalues: vec![2.0 / 0.64, 8.0],
            eig_tol: tolerances::CLASSIFIER_EIG,
            strongly_convex: true,
            two_strongly_convex: true,
            minimally_convex: true,
        },
        CatalogEntry {
            label: "cube-face",
            domain: Domain::cube(3, 0.5)?,
            at: point(&[0.5, 0.1, -0.2]),
            expected_eigenvalues: vec![0.0, 0.0],
            eig_tol: tolerances::CLASSIFIER_EIG,
            strongly_convex: false,
            two_strongly_convex: false,
            minimally_convex: false,
        },
    ])
}

pub fn classifier(cfg: &ExperimentConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut checks = Vec::new();

    for entry in catalog()? {
        let c = classify_boundary_point(&entry.domain, &entry.at)?;
        let mut violation: f64 = 0.0;
        for (got, want) in c.eigenvalues.iter().zip(&entry.expected_eigenvalues) {
            violation = violation.max((got - want).abs() / want.abs().max(1.0));
        }
        let flags_ok = c.strongly_convex == entry.strongly_convex
            && c.is_k_strongly_convex(2) == entry.two_strongly_convex
            && c.strongly_minimally_convex == entry.minimally_convex
            && c.is_k_strongly_convex(1) == entry.strongly_convex;
        if !flags_ok {
            violation = violation.max(1.0);
        }
        let name = format!("classify-{}", entry.label);
        let tol = cfg.tol(&name, entry.eig_tol);
        checks.push(
            CheckResult::new(name, 1, violation, tol).with_note(format!(
                "eigenvalues {:?}",
                c.eigenvalues
                    .iter()
                    .map(|l| (l * 1e6).round() / 1e6)
                    .collect::<Vec<_>>()
            )),
        );
    }

    // implications: strong convexity is 1-strong convexity and pushes up
    // through the orders; 2-strong convexity is minimal convexity in d = 3
    {
        let mut violation: f64 = 0.0;
        let mut tested = 0usize;
        for entry in catalog()? {
            let c = classify_boundary_point(&entry.domain, &entry.at)?;
            tested += 1;
            let mut previous = c.is_k_strongly_convex(1);
            if previous != c.strongly_convex {
                violation = 1.0;
            }
            for k in 2..=3 {
                let current = c.is_k_strongly_convex(k);
                if previous && !current {
                    violation = 1.0; // order monotonicity broke
                }
                previous = current;
            }
            if c.is_k_strongly_convex(2) != c.strongly_minimally_convex {
                violation = 1.0;
            }
            if !c.is_k_strongly_convex(3) {
                violation = 1.0; // k = d is vacuous
            }
        }
        checks.push(CheckResult::new(
            "convexity-implications",
            tested,
            violation,
            0.5,
        ));
    }

    // delta_2 / sqrt(delta) stays bounded approaching a strongly convex
    // boundary, and the fitted bound is stable under ladder refinement
    {
        let ell = Domain::ellipsoid_from_semi_axes(Point::zeros(3), &[1.0, 0.8, 0.5])?;
        let dir = point(&[1.0, 0.6, 0.2]).normalize();
        let exit = ell.ray_boundary_distance(&Point::zeros(3), &dir)?;
        let v = point(&[0.1, 1.0, -0.3]);
        let opts = DeltaKOptions::fast(cfg.seed);
        let ratio_at = |depth: f64| -> Result<f64> {
            let x = (exit - depth) * &dir;
            let delta = ell.boundary_distance(&x)?;
            let d2 = delta_k_numeric(&ell, &x, &v, 2, &opts)?.value;
            Ok(d2 / delta.sqrt())
        };
        let mut coarse: f64 = 0.0;
        for j in 1..=6 {
            coarse = coarse.max(ratio_at(0.2f64.powi(j))?);
        }
        let mut fine: f64 = 0.0;
        for j in 7..=10 {
            fine = fine.max(ratio_at(0.2f64.powi(j))?);
        }
        let violation = (fine - tolerances::LADDER_GROWTH_FACTOR * coarse).max(0.0);
        checks.push(
            CheckResult::new(
                "deltak-sqrt-growth-bounded",
                10,
                violation,
                cfg.tol("deltak-sqrt-growth-bounded", 1e-9),
            )
            .with_fit("max_ratio", coarse.max(fine))
            .with_fit("coarse_ladder_max", coarse)
            .with_fit("fine_ladder_max", fine)
            .with_note("delta_2 / sqrt(delta) along a ladder approaching the boundary"),
        );
    }

    Ok(VerificationReport::new(
        "classifier",
        cfg.seed,
        checks,
        &claims_for("classifier"),
        start.elapsed().as_secs_f64(),
    ))
}
