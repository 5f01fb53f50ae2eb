use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_supported_dim, orthonormal_completion, unit, Point, Vector};
use crate::error::{Error, Result};

/// Named defining functions for smooth implicit domains `{rho < 0}`.
///
/// Domains are referenced by name plus parameters (never executable code),
/// which is what lets them round-trip through the JSON descriptor format.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "builtin", rename_all = "snake_case")]
pub enum ImplicitBuiltin {
    /// `rho(x) = sum(((x_i - c_i)/a_i)^2) - 1`
    EllipsoidLevelSet { center: Vec<f64>, semi_axes: Vec<f64> },
    /// `rho(x) = x_1^2 + ... + x_m^2 - r^2`, flat along the remaining axes.
    CylinderLevelSet { radius: f64, round_dims: usize },
}

impl ImplicitBuiltin {
    fn dim_of(&self, fallback: usize) -> usize {
        match self {
            ImplicitBuiltin::EllipsoidLevelSet { center, .. } => center.len(),
            ImplicitBuiltin::CylinderLevelSet { .. } => fallback,
        }
    }
}

/// A smooth domain `{x : rho(x) < 0}` with analytic gradient and Hessian,
/// used where the parametric variants are not enough (classifier tests,
/// generic projection and ray-casting paths).
#[derive(Debug, Clone)]
pub struct ImplicitSmooth {
    pub(crate) builtin: ImplicitBuiltin,
    pub(crate) dim: usize,
    /// Radius of a ball (centered at the origin) used as the ray-casting
    /// horizon; rays that stay inside past `2 * bounding_radius` count as
    /// never exiting.
    pub(crate) bounding_radius: f64,
    /// Unique-projection collar: frames are only produced for
    /// `delta <= reach_fraction * bounding_radius`.
    pub(crate) reach_fraction: f64,
    pub(crate) convex: bool,
    /// When set, gradient and Hessian come from central finite differences
    /// of `rho` (step 1e-5) instead of the analytic formulas.
    pub(crate) fd_derivatives: bool,
    /// A point with `rho < 0`, used to bracket projections from outside.
    pub(crate) anchor: Point,
}

const FD_STEP: f64 = 1e-5;
const RAY_TOL: f64 = 1e-10;
const PROJECTION_TOL: f64 = 1e-10;
const PROJECTION_MAX_ITERS: usize = 200;
const PROJECTION_STARTS: usize = 8;
const TIE_TOL: f64 = 1e-8;

impl ImplicitSmooth {
    pub fn new(
        builtin: ImplicitBuiltin,
        dim: usize,
        bounding_radius: f64,
        convex: bool,
    ) -> Result<Self> {
        check_supported_dim(dim)?;
        if builtin.dim_of(dim) != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: builtin.dim_of(dim),
            });
        }
        if !(bounding_radius.is_finite() && bounding_radius > 0.0) {
            return Err(Error::InvalidParameter(
                "bounding radius must be positive".into(),
            ));
        }
        let anchor = match &builtin {
            ImplicitBuiltin::EllipsoidLevelSet { center, semi_axes } => {
                if semi_axes.len() != dim || semi_axes.iter().any(|a| *a <= 0.0) {
                    return Err(Error::InvalidParameter(
                        "semi-axes must be positive and match the dimension".into(),
                    ));
                }
                Vector::from_column_slice(center)
            }
            ImplicitBuiltin::CylinderLevelSet { radius, round_dims } => {
                if *radius <= 0.0 {
                    return Err(Error::InvalidParameter("radius must be positive".into()));
                }
                if *round_dims < 2 || *round_dims > dim {
                    return Err(Error::InvalidParameter(
                        "round_dims must lie in 2..=dim".into(),
                    ));
                }
                Vector::zeros(dim)
            }
        };
        let surface = Self {
            builtin,
            dim,
            bounding_radius,
            reach_fraction: 0.2,
            convex,
            fd_derivatives: false,
            anchor,
        };
        if surface.rho(&surface.anchor) >= 0.0 {
            return Err(Error::InvalidParameter("empty interior".into()));
        }
        Ok(surface)
    }

    pub fn with_reach_fraction(mut self, fraction: f64) -> Self {
        self.reach_fraction = fraction;
        self
    }

    pub fn with_fd_derivatives(mut self, fd: bool) -> Self {
        self.fd_derivatives = fd;
        self
    }

    pub fn builtin(&self) -> &ImplicitBuiltin {
        &self.builtin
    }

    pub fn bounding_radius(&self) -> f64 {
        self.bounding_radius
    }

    pub fn reach(&self) -> f64 {
        self.reach_fraction * self.bounding_radius
    }

    pub fn rho(&self, x: &Point) -> f64 {
        match &self.builtin {
            ImplicitBuiltin::EllipsoidLevelSet { center, semi_axes } => {
                let mut s = -1.0;
                for i in 0..self.dim {
                    let t = (x[i] - center[i]) / semi_axes[i];
                    s += t * t;
                }
                s
            }
            ImplicitBuiltin::CylinderLevelSet { radius, round_dims } => {
                let mut s = -radius * radius;
                for i in 0..*round_dims {
                    s += x[i] * x[i];
                }
                s
            }
        }
    }

    pub fn grad(&self, x: &Point) -> Vector {
        if self.fd_derivatives {
            return self.grad_fd(x);
        }
        let mut g = Vector::zeros(self.dim);
        match &self.builtin {
            ImplicitBuiltin::EllipsoidLevelSet { center, semi_axes } => {
                for i in 0..self.dim {
                    g[i] = 2.0 * (x[i] - center[i]) / (semi_axes[i] * semi_axes[i]);
                }
            }
            ImplicitBuiltin::CylinderLevelSet { round_dims, .. } => {
                for i in 0..*round_dims {
                    g[i] = 2.0 * x[i];
                }
            }
        }
        g
    }

    pub fn hess(&self, x: &Point) -> DMatrix<f64> {
        if self.fd_derivatives {
            return self.hess_fd(x);
        }
        let mut h = DMatrix::zeros(self.dim, self.dim);
        match &self.builtin {
            ImplicitBuiltin::EllipsoidLevelSet { semi_axes, .. } => {
                for i in 0..self.dim {
                    h[(i, i)] = 2.0 / (semi_axes[i] * semi_axes[i]);
                }
            }
            ImplicitBuiltin::CylinderLevelSet { round_dims, .. } => {
                for i in 0..*round_dims {
                    h[(i, i)] = 2.0;
                }
            }
        }
        h
    }

    fn grad_fd(&self, x: &Point) -> Vector {
        let mut g = Vector::zeros(self.dim);
        let mut p = x.clone();
        for i in 0..self.dim {
            p[i] = x[i] + FD_STEP;
            let plus = self.rho(&p);
            p[i] = x[i] - FD_STEP;
            let minus = self.rho(&p);
            p[i] = x[i];
            g[i] = (plus - minus) / (2.0 * FD_STEP);
        }
        g
    }

    fn hess_fd(&self, x: &Point) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.dim, self.dim);
        let mut p = x.clone();
        for i in 0..self.dim {
            for j in i..self.dim {
                p[i] += FD_STEP;
                p[j] += FD_STEP;
                let pp = self.rho(&p);
                p[j] -= 2.0 * FD_STEP;
                let pm = self.rho(&p);
                p[i] -= 2.0 * FD_STEP;
                let mm = self.rho(&p);
                p[j] += 2.0 * FD_STEP;
                let mp = self.rho(&p);
                p[i] = x[i];
                p[j] = x[j];
                let v = (pp - pm - mp + mm) / (4.0 * FD_STEP * FD_STEP);
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        h
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.rho(x) < 0.0
    }

    /// Exit distance of the ray `x + t u` (`u` unit), by geometric bracket
    /// growth followed by bisection. Convexity makes the sign change along
    /// the ray monotone, so the bracket is valid.
    pub fn ray_exit(&self, x: &Point, u: &Vector) -> f64 {
        let horizon = 2.0 * self.bounding_radius + x.norm();
        let mut lo = 0.0;
        let mut t = 1e-3;
        loop {
            if t > horizon {
                return f64::INFINITY;
            }
            let p = x + t * u;
            if self.rho(&p) >= 0.0 {
                break;
            }
            lo = t;
            t *= 2.0;
        }
        let mut hi = t;
        while hi - lo > RAY_TOL {
            let mid = 0.5 * (lo + hi);
            let p = x + mid * u;
            if self.rho(&p) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// All feet found by the multi-start projection solver, deduplicated,
    /// sorted by distance from `x`.
    pub(crate) fn projection_candidates(&self, x: &Point) -> Result<Vec<(Point, f64)>> {
        let mut starts: Vec<Point> = Vec::new();
        if self.contains(x) {
            // ray exits along a deterministic spread of directions
            let g = self.grad(x);
            if let Ok(gdir) = unit(&g) {
                let t = self.ray_exit(x, &gdir);
                if t.is_finite() {
                    starts.push(x + t * &gdir);
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b97f4a7c15);
            let mut dirs: Vec<Vector> = Vec::new();
            if let Ok(first) = unit(&Vector::from_fn(self.dim, |i, _| (i as f64 + 1.0).sin())) {
                dirs.extend(orthonormal_completion(&first));
            }
            while dirs.len() < 4 * PROJECTION_STARTS {
                let v = Vector::from_fn(self.dim, |_, _| rng.gen_range(-1.0..1.0));
                if let Ok(u) = unit(&v) {
                    dirs.push(u);
                }
            }
            for dir in dirs {
                if starts.len() >= PROJECTION_STARTS {
                    break;
                }
                let t = self.ray_exit(x, &dir);
                if t.is_finite() {
                    starts.push(x + t * &dir);
                }
            }
        } else {
            // bracket along segments toward interior anchors
            let mut anchors = vec![self.anchor.clone()];
            let shift = 0.1 * self.bounding_radius;
            for i in 0..self.dim.min(PROJECTION_STARTS - 1) {
                let mut a = self.anchor.clone();
                a[i] += shift;
                if self.contains(&a) {
                    anchors.push(a);
                }
                let mut b = self.anchor.clone();
                b[i] -= shift;
                if self.contains(&b) {
                    anchors.push(b);
                }
            }
            for a in anchors.into_iter().take(PROJECTION_STARTS) {
                let dir = &a - x;
                if let Ok(u) = unit(&dir) {
                    let len = dir.norm();
                    let mut lo = 0.0;
                    let mut hi = len;
                    // rho(x) >= 0, rho(a) < 0
                    for _ in 0..200 {
                        if hi - lo <= RAY_TOL {
                            break;
                        }
                        let mid = 0.5 * (lo + hi);
                        if self.rho(&(x + mid * &u)) >= 0.0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    starts.push(x + 0.5 * (lo + hi) * &u);
                }
            }
        }
        if starts.is_empty() {
            return Err(Error::NonConvergence {
                iters: 0,
                context: "no boundary bracket found for projection".into(),
            });
        }

        let mut feet: Vec<(Point, f64)> = Vec::new();
        let mut converged_any = false;
        for s in starts {
            if let Some(foot) = self.kkt_newton(x, s) {
                converged_any = true;
                let dist = (&foot - x).norm();
                let dup = feet.iter().any(|(f, _)| (f - &foot).norm() < 1e-7);
                if !dup {
                    feet.push((foot, dist));
                }
            }
        }
        if !converged_any {
            return Err(Error::NonConvergence {
                iters: PROJECTION_MAX_ITERS,
                context: "projection solver did not converge from any start".into(),
            });
        }
        feet.sort_by(|a, b| a.1.total_cmp(&b.1));
        Ok(feet)
    }

    /// Nearest boundary point and distance; errors when the minimizer is
    /// ambiguous (two feet at the same distance within 1e-8).
    pub(crate) fn project(&self, x: &Point) -> Result<(Point, f64)> {
        let feet = self.projection_candidates(x)?;
        let (best, dist) = feet[0].clone();
        if let Some((other, other_dist)) = feet.get(1) {
            if (other_dist - dist).abs() <= TIE_TOL && (other - &best).norm() > 1e-6 {
                return Err(Error::NonUniqueProjection(format!(
                    "two feet at distance {dist:.3e}"
                )));
            }
        }
        Ok((best, dist))
    }

    /// Damped Newton on the stationarity system of
    /// `min |xi - x|^2 / 2  s.t.  rho(xi) = 0`.
    fn kkt_newton(&self, x: &Point, start: Point) -> Option<Point> {
        let d = self.dim;
        let mut xi = start;
        let g0 = self.grad(&xi);
        let gn = g0.norm_squared();
        if gn < 1e-20 {
            return None;
        }
        let mut lambda = (x - &xi).dot(&g0) / gn * (-1.0);
        let scale = 1.0_f64.max(x.norm());
        let residual = |xi: &Point, lambda: f64| -> (Vector, f64) {
            let g = self.grad(xi);
            let mut r = Vector::zeros(d + 1);
            let head = (xi - x) + lambda * &g;
            for i in 0..d {
                r[i] = head[i];
            }
            r[d] = self.rho(xi);
            let norm = r.norm();
            (r, norm)
        };
        let (mut r, mut rnorm) = residual(&xi, lambda);
        for _ in 0..PROJECTION_MAX_ITERS {
            if rnorm <= PROJECTION_TOL * scale {
                return Some(xi);
            }
            let g = self.grad(&xi);
            let h = self.hess(&xi);
            let mut jac = DMatrix::zeros(d + 1, d + 1);
            for i in 0..d {
                for j in 0..d {
                    jac[(i, j)] = lambda * h[(i, j)] + if i == j { 1.0 } else { 0.0 };
                }
                jac[(i, d)] = g[i];
                jac[(d, i)] = g[i];
            }
            let lu = jac.lu();
            let step = lu.solve(&(-&r))?;
            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let xi_try = &xi + alpha * step.rows(0, d).into_owned();
                let lambda_try = lambda + alpha * step[d];
                let (r_try, rnorm_try) = residual(&xi_try, lambda_try);
                if rnorm_try < rnorm {
                    xi = xi_try;
                    lambda = lambda_try;
                    r = r_try;
                    rnorm = rnorm_try;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted {
                return None;
            }
        }
        if rnorm <= PROJECTION_TOL * scale {
            Some(xi)
        } else {
            None
        }
    }
}
