//! Four-point hyperbolicity constants of sampled intrinsic distances, and
//! the sanity of the graph machinery against the cross-ratio oracle.

use finsler_core::error::Result;
use finsler_core::geometry::{point, Domain, Point};
use finsler_core::intrinsic::{graph_distance, GraphConfig, PathGraph};
use finsler_core::metrics::{hilbert_distance_closed_form, MetricEvaluator, MetricKind};
use rand::Rng;
use std::time::Instant;

use super::suite_rng;
use crate::config::ExperimentConfig;
use crate::coverage::claims_for;
use crate::report::{CheckResult, VerificationReport};
use crate::tolerances;

/// Largest four-point defect `(S1 - S2) / 2` over all 4-subsets, where
/// `S1 >= S2 >= S3` are the three pairings of opposite-side sums.
fn four_point_constant(dist: &[Vec<f64>]) -> f64 {
    let n = dist.len();
    let mut delta: f64 = 0.0;
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for e in (c + 1)..n {
                    let mut sums = [
                        dist[a][b] + dist[c][e],
                        dist[a][c] + dist[b][e],
                        dist[a][e] + dist[b][c],
                    ];
                    sums.sort_by(f64::total_cmp);
                    delta = delta.max(0.5 * (sums[2] - sums[1]));
                }
            }
        }
    }
    delta
}

/// Boundary-approaching ladder of anchors: several feet, dyadic depths.
fn ladder_anchors(domain: &Domain, feet: usize, depths: usize) -> Result<Vec<Point>> {
    let center = domain.interior_reference();
    let d = domain.dim();
    let mut anchors = Vec::with_capacity(feet * depths);
    for i in 0..feet {
        let angle = std::f64::consts::TAU * i as f64 / feet as f64;
        let mut dir = finsler_core::geometry::Vector::zeros(d);
        dir[0] = angle.cos();
        dir[1] = angle.sin();
        let t = domain.ray_boundary_distance(&center, &dir)?;
        if !t.is_finite() {
            continue;
        }
        let foot = &center + t * &dir;
        let n = domain.outward_normal_at(&foot)?;
        for j in 0..depths {
            let depth = 0.2 * 0.5f64.powi(j as i32);
            anchors.push(&foot - depth * &n);
        }
    }
    Ok(anchors)
}

fn anchor_distance_matrix(graph: &PathGraph) -> Vec<Vec<f64>> {
    let n = graph.anchor_count();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        let row = graph.distances_from(i);
        for j in 0..n {
            dist[i][j] = row[j];
        }
    }
    dist
}

pub fn gromov(cfg: &ExperimentConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut rng = suite_rng(cfg, 0x6406);
    let mut checks = Vec::new();

    let graph_cfg = GraphConfig {
        node_count: cfg.samples(4000),
        seed: cfg.seed,
        ..GraphConfig::default()
    };

    // four collinear points on a normal fiber are tree-like
    {
        let hs = Domain::half_space_x1(2);
        let metric = MetricEvaluator::new(MetricKind::QuasiHyperbolic { k: 1 }, hs)?;
        let anchors: Vec<Point> = [0.01, 0.04, 0.16, 0.64]
            .iter()
            .map(|&depth| point(&[depth, 0.0]))
            .collect();
        let bare = GraphConfig {
            node_count: 0,
            degree: 4,
            seed: cfg.seed,
            ..GraphConfig::default()
        };
        let graph = PathGraph::build(&metric, &anchors, &bare)?;
        let delta = four_point_constant(&anchor_distance_matrix(&graph));
        checks.push(
            CheckResult::new(
                "collinear-fiber-points-tree-like",
                anchors.len(),
                delta,
                cfg.tol("collinear-fiber-points-tree-like", tolerances::GROMOV_COLLINEAR),
            )
            .with_note("four points on one normal line are isometric to a segment"),
        );
    }

    // ellipse ladder: finite constant, stable under node doubling
    {
        let ellipse =
            Domain::ellipsoid_from_semi_axes(Point::zeros(2), &[1.0, 0.5])?;
        let metric =
            MetricEvaluator::new(MetricKind::QuasiHyperbolic { k: 1 }, ellipse.clone())?;
        let anchors = ladder_anchors(&ellipse, 8, 5)?;
        let mut graph = PathGraph::build(&metric, &anchors, &graph_cfg)?;
        let delta_coarse = four_point_constant(&anchor_distance_matrix(&graph));
        graph.extend(&metric, graph_cfg.node_count, &graph_cfg)?;
        let delta_fine = four_point_constant(&anchor_distance_matrix(&graph));
        let stability =
            (delta_fine - delta_coarse).abs() / delta_coarse.abs().max(0.1);
        checks.push(
            CheckResult::new(
                "ellipse-four-point-stable",
                anchors.len(),
                stability,
                cfg.tol("ellipse-four-point-stable", tolerances::GROMOV_STABILITY_REL),
            )
            .with_fit("delta", delta_fine)
            .with_fit("delta_at_half_nodes", delta_coarse)
            .with_note("fitted four-point constant; stability measured across node doubling"),
        );
    }

    // ball ladder: finite constant reported
    {
        let disk = Domain::unit_ball(2);
        let metric = MetricEvaluator::new(MetricKind::QuasiHyperbolic { k: 1 }, disk.clone())?;
        let anchors = ladder_anchors(&disk, 8, 5)?;
        let graph = PathGraph::build(&metric, &anchors, &graph_cfg)?;
        let delta = four_point_constant(&anchor_distance_matrix(&graph));
        checks.push(
            CheckResult::fit_only("ball-four-point-constant", anchors.len())
                .with_fit("delta", delta),
        );
    }

    // the graph reproduces the cross-ratio Hilbert distance on the disk
    {
        let disk = Domain::unit_ball(2);
        let metric = MetricEvaluator::new(MetricKind::KobayashiHilbert, disk.clone())?;
        let n_pairs = 5;
        let tol = cfg.tol("disk-graph-matches-cross-ratio", tolerances::GRAPH_VS_CROSS_RATIO_REL);
        let mut worst: f64 = 0.0;
        let mut pairs = vec![(point(&[0.0, 0.0]), point(&[0.5, 0.0]))];
        while pairs.len() < n_pairs {
            let x = point(&[rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9)]);
            let y = point(&[rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9)]);
            if x.norm() < 0.9 && y.norm() < 0.9 && (&x - &y).norm() > 0.3 {
                pairs.push((x, y));
            }
        }
        for (x, y) in &pairs {
            let exact = hilbert_distance_closed_form(&disk, x, y)?;
            let approx = graph_distance(&metric, x, y, &graph_cfg)?.value;
            if approx < exact - 1e-9 {
                worst = worst.max(1.0); // would violate the upper-bound semantics
            }
            worst = worst.max((approx - exact) / exact.max(1e-12));
        }
        checks.push(
            CheckResult::new("disk-graph-matches-cross-ratio", pairs.len(), worst, tol)
                .with_note("graph distance within 2% above the exact chord value"),
        );
    }

    Ok(VerificationReport::new(
        "gromov",
        cfg.seed,
        checks,
        &claims_for("gromov"),
        start.elapsed().as_secs_f64(),
    ))
}
