//! Named verification suites. Each one runs a batch of checks against
//! closed forms, independent oracles, or fitted constants and returns a
//! [`VerificationReport`]. All randomness flows from the config seed.

mod ball_bounds;
mod classifier;
mod gromov;
mod halfspace_ball_qk;
mod localization;
mod quasidistance;
mod rigidity;
mod sandwich;

pub use ball_bounds::ball_bounds;
pub use classifier::classifier;
pub use gromov::gromov;
pub use halfspace_ball_qk::halfspace_ball_qk;
pub use localization::localization;
pub use quasidistance::quasidistance;
pub use rigidity::rigidity;
pub use sandwich::sandwich;

use finsler_core::error::{Error, Result};
use finsler_core::geometry::{Domain, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;
use crate::report::VerificationReport;

pub const SUITE_NAMES: &[&str] = &[
    "ball_bounds",
    "halfspace_ball_qk",
    "sandwich",
    "quasidistance",
    "rigidity",
    "gromov",
    "localization",
    "classifier",
];

/// Run one suite by name.
pub fn run_suite(name: &str, cfg: &ExperimentConfig) -> Result<VerificationReport> {
    match name {
        "ball_bounds" => ball_bounds(cfg),
        "halfspace_ball_qk" => halfspace_ball_qk(cfg),
        "sandwich" => sandwich(cfg),
        "quasidistance" => quasidistance(cfg),
        "rigidity" => rigidity(cfg),
        "gromov" => gromov(cfg),
        "localization" => localization(cfg),
        "classifier" => classifier(cfg),
        other => Err(Error::InvalidParameter(format!(
            "unknown suite {other:?}; known: {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}

/// Run every suite in order.
pub fn run_all(cfg: &ExperimentConfig) -> Result<Vec<VerificationReport>> {
    SUITE_NAMES.iter().map(|s| run_suite(s, cfg)).collect()
}

pub(crate) fn suite_rng(cfg: &ExperimentConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e3779b97f4a7c15) ^ salt)
}

pub(crate) fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    loop {
        let v = Vector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-9 && n <= 1.0 {
            return v / n;
        }
    }
}

pub(crate) fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    loop {
        let v = Vector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        if v.norm() > 1e-6 {
            return v;
        }
    }
}

/// Rejection-sample an interior point, walking out from the interior
/// reference point.
pub(crate) fn random_interior(domain: &Domain, rng: &mut ChaCha8Rng) -> Result<Vector> {
    let reference = domain.interior_reference();
    let d = domain.dim();
    for _ in 0..10_000 {
        let dir = random_unit(rng, d);
        let reach = domain
            .ray_boundary_distance(&reference, &dir)?
            .min(8.0)
            .max(1e-6);
        let candidate = &reference + rng.gen_range(0.0..1.0) * reach * dir;
        if domain.contains(&candidate)? {
            return Ok(candidate);
        }
    }
    Err(Error::NonConvergence {
        iters: 10_000,
        context: "interior sampling".into(),
    })
}

