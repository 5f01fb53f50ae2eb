use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::frame::BoundaryFrame;
use super::implicit::{ImplicitBuiltin, ImplicitSmooth};
use super::{check_dim, check_finite, check_supported_dim, unit, Point, Vector};
use crate::error::{Error, Result};

/// Tolerance for declaring two nearest-point candidates a tie, which makes
/// the projection non-unique.
const PROJECTION_TIE_TOL: f64 = 1e-8;

/// Euclidean ball `{ |x - center| < radius }`.
#[derive(Debug, Clone)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

/// Open half-space `{ <x - base, normal> < 0 }` with outward unit `normal`.
#[derive(Debug, Clone)]
pub struct HalfSpace {
    pub base: Point,
    pub normal: Vector,
}

/// Open slab `{ |<x - base, normal>| < half_width }` between two parallel
/// hyperplanes.
#[derive(Debug, Clone)]
pub struct Slab {
    pub base: Point,
    pub normal: Vector,
    pub half_width: f64,
}

/// Ellipsoid `{ (x-c)^T S^{-1} (x-c) < 1 }`. The eigenvalues of `shape` are
/// the squared semi-axes.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    pub center: Point,
    pub shape: DMatrix<f64>,
    inv_shape: DMatrix<f64>,
    /// semi-axes (sqrt of the eigenvalues of `shape`), ascending
    axes: Vec<f64>,
    /// columns are the corresponding principal directions
    rot: DMatrix<f64>,
}

/// One face of a polytope: `{ <normal, x> = offset }` with unit `normal`;
/// the interior satisfies `<normal, x> < offset` for every face.
#[derive(Debug, Clone)]
pub struct Face {
    pub normal: Vector,
    pub offset: f64,
}

/// Convex polytope as an intersection of half-spaces, with a certified
/// interior point.
#[derive(Debug, Clone)]
pub struct Polytope {
    pub faces: Vec<Face>,
    interior_point: Point,
}

/// A convex domain of `R^d` in one of six parametric forms, with membership,
/// ray, distance, and projection oracles.
#[derive(Debug, Clone)]
pub enum Domain {
    Ball(Ball),
    HalfSpace(HalfSpace),
    Slab(Slab),
    Ellipsoid(Ellipsoid),
    Polytope(Polytope),
    Implicit(ImplicitSmooth),
}

impl Domain {
    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        check_supported_dim(center.len())?;
        check_finite(&center)?;
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter("radius must be positive".into()));
        }
        Ok(Domain::Ball(Ball { center, radius }))
    }

    pub fn unit_ball(dim: usize) -> Self {
        Domain::ball(Vector::zeros(dim), 1.0).expect("unit ball")
    }

    pub fn half_space(base: Point, outward_normal: Vector) -> Result<Self> {
        check_supported_dim(base.len())?;
        check_finite(&base)?;
        check_dim(base.len(), &outward_normal)?;
        let normal = unit(&outward_normal)?;
        Ok(Domain::HalfSpace(HalfSpace { base, normal }))
    }

    /// The half-space `{ x_1 > 0 }`.
    pub fn half_space_x1(dim: usize) -> Self {
        let mut n = Vector::zeros(dim);
        n[0] = -1.0;
        Domain::half_space(Vector::zeros(dim), n).expect("half-space")
    }

    pub fn slab(base: Point, normal: Vector, half_width: f64) -> Result<Self> {
        check_supported_dim(base.len())?;
        check_finite(&base)?;
        check_dim(base.len(), &normal)?;
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidParameter(
                "half width must be positive".into(),
            ));
        }
        let normal = unit(&normal)?;
        Ok(Domain::Slab(Slab {
            base,
            normal,
            half_width,
        }))
    }

    /// The slab `{ |x_1| < half_width }`.
    pub fn slab_x1(dim: usize, half_width: f64) -> Self {
        let mut n = Vector::zeros(dim);
        n[0] = 1.0;
        Domain::slab(Vector::zeros(dim), n, half_width).expect("slab")
    }

    pub fn ellipsoid(center: Point, shape: DMatrix<f64>) -> Result<Self> {
        let d = center.len();
        check_supported_dim(d)?;
        check_finite(&center)?;
        if shape.nrows() != d || shape.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: shape.nrows(),
            });
        }
        if (&shape - shape.transpose()).amax() > 1e-10 {
            return Err(Error::InvalidParameter("shape must be symmetric".into()));
        }
        let sym = DMatrix::from_fn(d, d, |i, j| 0.5 * (shape[(i, j)] + shape[(j, i)]));
        let chol = sym
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidParameter("shape must be positive definite".into()))?;
        let inv_shape = chol.inverse();
        let eig = SymmetricEigen::new(sym.clone());
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let axes: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i].sqrt()).collect();
        let rot = DMatrix::from_fn(d, d, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok(Domain::Ellipsoid(Ellipsoid {
            center,
            shape: sym,
            inv_shape,
            axes,
            rot,
        }))
    }

    /// Axis-aligned ellipsoid `sum(((x_i - c_i)/a_i)^2) < 1`.
    pub fn ellipsoid_from_semi_axes(center: Point, semi_axes: &[f64]) -> Result<Self> {
        let d = center.len();
        if semi_axes.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: semi_axes.len(),
            });
        }
        if semi_axes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::InvalidParameter(
                "semi-axes must be positive".into(),
            ));
        }
        let shape = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                semi_axes[i] * semi_axes[i]
            } else {
                0.0
            }
        });
        Domain::ellipsoid(center, shape)
    }

    pub fn polytope(faces: Vec<(Vector, f64)>) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::InvalidParameter(
                "polytope needs at least one face".into(),
            ));
        }
        let d = faces[0].0.len();
        check_supported_dim(d)?;
        let mut normalized = Vec::with_capacity(faces.len());
        for (n, b) in faces {
            check_dim(d, &n)?;
            if !b.is_finite() {
                return Err(Error::InvalidParameter("face offset must be finite".into()));
            }
            let n_unit = unit(&n)?;
            let scale = n.norm();
            normalized.push(Face {
                normal: n_unit,
                offset: b / scale,
            });
        }
        let interior_point = chebyshev_like_center(&normalized, d)?;
        Ok(Domain::Polytope(Polytope {
            faces: normalized,
            interior_point,
        }))
    }

    /// Axis-aligned cube `{ |x_i| < half_width }`.
    pub fn cube(dim: usize, half_width: f64) -> Result<Self> {
        let mut faces = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut n = Vector::zeros(dim);
            n[i] = 1.0;
            faces.push((n.clone(), half_width));
            faces.push((-n, half_width));
        }
        Domain::polytope(faces)
    }

    pub fn implicit(surface: ImplicitSmooth) -> Self {
        Domain::Implicit(surface)
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Ball(b) => b.center.len(),
            Domain::HalfSpace(h) => h.base.len(),
            Domain::Slab(s) => s.base.len(),
            Domain::Ellipsoid(e) => e.center.len(),
            Domain::Polytope(p) => p.faces[0].normal.len(),
            Domain::Implicit(s) => s.dim,
        }
    }

    /// Convexity is guaranteed by construction for the parametric variants
    /// and user-declared for implicit ones.
    pub fn is_convex(&self) -> bool {
        match self {
            Domain::Implicit(s) => s.convex,
            _ => true,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Domain::Ball(_) => "ball",
            Domain::HalfSpace(_) => "half_space",
            Domain::Slab(_) => "slab",
            Domain::Ellipsoid(_) => "ellipsoid",
            Domain::Polytope(_) => "polytope",
            Domain::Implicit(_) => "implicit",
        }
    }

    /// A point guaranteed to lie in the interior.
    pub fn interior_reference(&self) -> Point {
        match self {
            Domain::Ball(b) => b.center.clone(),
            Domain::HalfSpace(h) => &h.base - &h.normal,
            Domain::Slab(s) => s.base.clone(),
            Domain::Ellipsoid(e) => e.center.clone(),
            Domain::Polytope(p) => p.interior_point.clone(),
            Domain::Implicit(s) => s.anchor.clone(),
        }
    }

    /// Axis-aligned bounding box for bounded variants; `None` when the
    /// domain is (potentially) unbounded.
    pub fn bounding_box(&self) -> Option<(Vector, Vector)> {
        match self {
            Domain::Ball(b) => {
                let r = Vector::from_element(b.center.len(), b.radius);
                Some((&b.center - &r, &b.center + &r))
            }
            Domain::Ellipsoid(e) => {
                let ext = Vector::from_fn(e.center.len(), |i, _| e.shape[(i, i)].sqrt());
                Some((&e.center - &ext, &e.center + &ext))
            }
            Domain::Implicit(s) => {
                let r = Vector::from_element(s.dim, s.bounding_radius);
                Some((-r.clone(), r))
            }
            _ => None,
        }
    }

    /// Strict interior membership.
    pub fn contains(&self, x: &Point) -> Result<bool> {
        check_dim(self.dim(), x)?;
        check_finite(x)?;
        Ok(match self {
            Domain::Ball(b) => (x - &b.center).norm() < b.radius,
            Domain::HalfSpace(h) => (x - &h.base).dot(&h.normal) < 0.0,
            Domain::Slab(s) => (x - &s.base).dot(&s.normal).abs() < s.half_width,
            Domain::Ellipsoid(e) => {
                let y = x - &e.center;
                (&e.inv_shape * &y).dot(&y) < 1.0
            }
            Domain::Polytope(p) => p.faces.iter().all(|f| f.normal.dot(x) < f.offset),
            Domain::Implicit(s) => s.contains(x),
        })
    }

    fn require_interior(&self, x: &Point) -> Result<()> {
        if !self.contains(x)? {
            return Err(Error::OutsideDomain);
        }
        Ok(())
    }

    /// Exit distance of the ray `x + t u` from an interior `x` along the
    /// unit direction `u`; `+inf` when the ray never leaves the domain.
    pub fn ray_boundary_distance(&self, x: &Point, u: &Vector) -> Result<f64> {
        self.require_interior(x)?;
        check_dim(self.dim(), u)?;
        let u = unit(u)?;
        Ok(match self {
            Domain::Ball(b) => {
                let y = x - &b.center;
                ray_exit_sphere(&y, &u, b.radius)
            }
            Domain::HalfSpace(h) => {
                let s = (x - &h.base).dot(&h.normal); // < 0 inside
                let rate = u.dot(&h.normal);
                if rate <= 0.0 {
                    f64::INFINITY
                } else {
                    -s / rate
                }
            }
            Domain::Slab(s) => {
                let v = (x - &s.base).dot(&s.normal);
                let rate = u.dot(&s.normal);
                if rate > 0.0 {
                    (s.half_width - v) / rate
                } else if rate < 0.0 {
                    (-s.half_width - v) / rate
                } else {
                    f64::INFINITY
                }
            }
            Domain::Ellipsoid(e) => {
                let y = x - &e.center;
                let my = &e.inv_shape * &y;
                let mu = &e.inv_shape * &u;
                let a = mu.dot(&u);
                let b = my.dot(&u);
                let c0 = my.dot(&y) - 1.0;
                // a > 0, c0 < 0 inside: positive root of a t^2 + 2 b t + c0
                let disc = (b * b - a * c0).sqrt();
                if b > 0.0 {
                    -c0 / (b + disc)
                } else {
                    (disc - b) / a
                }
            }
            Domain::Polytope(p) => {
                let mut t = f64::INFINITY;
                for f in &p.faces {
                    let rate = f.normal.dot(&u);
                    if rate > 0.0 {
                        let margin = f.offset - f.normal.dot(x);
                        t = t.min(margin / rate);
                    }
                }
                t
            }
            Domain::Implicit(s) => s.ray_exit(x, &u),
        })
    }

    /// Distance from `x` to the boundary along the full line `x + R v`;
    /// the minimum of the two ray exits.
    pub fn line_boundary_distance(&self, x: &Point, v: &Vector) -> Result<f64> {
        let u = unit(v)?;
        let fwd = self.ray_boundary_distance(x, &u)?;
        let back = self.ray_boundary_distance(x, &(-&u))?;
        Ok(fwd.min(back))
    }

    /// Euclidean distance from an interior point to the boundary.
    pub fn boundary_distance(&self, x: &Point) -> Result<f64> {
        self.require_interior(x)?;
        Ok(match self {
            Domain::Ball(b) => b.radius - (x - &b.center).norm(),
            Domain::HalfSpace(h) => -(x - &h.base).dot(&h.normal),
            Domain::Slab(s) => s.half_width - (x - &s.base).dot(&s.normal).abs(),
            Domain::Ellipsoid(e) => e.nearest_boundary(x).dist,
            Domain::Polytope(p) => p
                .faces
                .iter()
                .map(|f| f.offset - f.normal.dot(x))
                .fold(f64::INFINITY, f64::min),
            Domain::Implicit(s) => s.projection_candidates(x)?[0].1,
        })
    }

    /// Signed distance to the boundary: negative inside, positive outside,
    /// zero on the boundary. Defined on all of `R^d`.
    pub fn signed_distance(&self, x: &Point) -> Result<f64> {
        check_dim(self.dim(), x)?;
        check_finite(x)?;
        Ok(match self {
            Domain::Ball(b) => (x - &b.center).norm() - b.radius,
            Domain::HalfSpace(h) => (x - &h.base).dot(&h.normal),
            Domain::Slab(s) => (x - &s.base).dot(&s.normal).abs() - s.half_width,
            Domain::Ellipsoid(e) => {
                let inside = self.contains(x)?;
                let dist = e.nearest_boundary(x).dist;
                if inside {
                    -dist
                } else {
                    dist
                }
            }
            Domain::Polytope(p) => {
                if self.contains(x)? {
                    -p.faces
                        .iter()
                        .map(|f| f.offset - f.normal.dot(x))
                        .fold(f64::INFINITY, f64::min)
                } else {
                    let proj = p.project_onto(x);
                    (x - proj).norm()
                }
            }
            Domain::Implicit(s) => {
                let dist = s.projection_candidates(x)?[0].1;
                if s.contains(x) {
                    -dist
                } else {
                    dist
                }
            }
        })
    }

    /// Outward unit normal at a boundary point (within 1e-8 of the
    /// boundary). Errors on polytope edges and degenerate gradients.
    pub fn outward_normal_at(&self, xi: &Point) -> Result<Vector> {
        check_dim(self.dim(), xi)?;
        if self.signed_distance(xi)?.abs() > 1e-8 {
            return Err(Error::InvalidParameter(
                "point is not on the boundary".into(),
            ));
        }
        match self {
            Domain::Ball(b) => unit(&(xi - &b.center)),
            Domain::HalfSpace(h) => Ok(h.normal.clone()),
            Domain::Slab(s) => {
                let side = (xi - &s.base).dot(&s.normal);
                Ok(if side >= 0.0 {
                    s.normal.clone()
                } else {
                    -s.normal.clone()
                })
            }
            Domain::Ellipsoid(e) => unit(&(&e.inv_shape * (xi - &e.center))),
            Domain::Polytope(p) => {
                let mut found = None;
                for f in &p.faces {
                    if (f.normal.dot(xi) - f.offset).abs() <= 1e-8 {
                        if found.is_some() {
                            return Err(Error::DegenerateGradient);
                        }
                        found = Some(f.normal.clone());
                    }
                }
                found.ok_or(Error::DegenerateGradient)
            }
            Domain::Implicit(s) => {
                let g = s.grad(xi);
                if g.norm() < 1e-10 {
                    return Err(Error::DegenerateGradient);
                }
                unit(&g)
            }
        }
    }

    /// Projection data at an interior point: unique nearest boundary point,
    /// outward normal, boundary distance. Errors when the nearest point is
    /// not unique (ball center, slab midplane, polytope edge fans,
    /// ellipsoid focal degeneracies) or outside the implicit reach collar.
    pub fn boundary_frame(&self, x: &Point) -> Result<BoundaryFrame> {
        self.require_interior(x)?;
        match self {
            Domain::Ball(b) => {
                let y = x - &b.center;
                let rho = y.norm();
                if rho <= PROJECTION_TIE_TOL {
                    return Err(Error::NonUniqueProjection(
                        "ball center is equidistant from the whole sphere".into(),
                    ));
                }
                let n = y / rho;
                let foot = &b.center + b.radius * &n;
                Ok(BoundaryFrame::new(foot, n, b.radius - rho))
            }
            Domain::HalfSpace(h) => {
                let s = (x - &h.base).dot(&h.normal);
                let delta = -s;
                let foot = x + delta * &h.normal;
                Ok(BoundaryFrame::new(foot, h.normal.clone(), delta))
            }
            Domain::Slab(s) => {
                let v = (x - &s.base).dot(&s.normal);
                let near = s.half_width - v.abs();
                let far = s.half_width + v.abs();
                if far - near <= PROJECTION_TIE_TOL {
                    return Err(Error::NonUniqueProjection(
                        "slab midplane is equidistant from both faces".into(),
                    ));
                }
                let n = if v >= 0.0 {
                    s.normal.clone()
                } else {
                    -s.normal.clone()
                };
                let foot = x + near * &n;
                Ok(BoundaryFrame::new(foot, n, near))
            }
            Domain::Ellipsoid(e) => {
                let nearest = e.nearest_boundary(x);
                if nearest.tie {
                    return Err(Error::NonUniqueProjection(
                        "ellipsoid focal degeneracy".into(),
                    ));
                }
                let foot = nearest.foot.ok_or_else(|| {
                    Error::NonUniqueProjection("ellipsoid focal degeneracy".into())
                })?;
                let delta = nearest.dist;
                // the gradient direction at the foot; stays well-defined
                // when x is within roundoff of the boundary
                let n = unit(&(&e.inv_shape * (&foot - &e.center)))?;
                Ok(BoundaryFrame::new(foot, n, delta))
            }
            Domain::Polytope(p) => {
                let mut margins: Vec<(f64, usize)> = p
                    .faces
                    .iter()
                    .enumerate()
                    .map(|(i, f)| (f.offset - f.normal.dot(x), i))
                    .collect();
                margins.sort_by(|a, b| a.0.total_cmp(&b.0));
                if margins.len() > 1 && margins[1].0 - margins[0].0 <= PROJECTION_TIE_TOL {
                    return Err(Error::NonUniqueProjection(
                        "two faces at the same distance".into(),
                    ));
                }
                let (delta, idx) = margins[0];
                let n = p.faces[idx].normal.clone();
                let foot = x + delta * &n;
                Ok(BoundaryFrame::new(foot, n, delta))
            }
            Domain::Implicit(s) => {
                let (foot, delta) = s.project(x)?;
                if delta > s.reach() {
                    return Err(Error::CollarViolation(format!(
                        "delta {delta:.3e} exceeds reach {:.3e}",
                        s.reach()
                    )));
                }
                let g = s.grad(&foot);
                if g.norm() < 1e-10 {
                    return Err(Error::DegenerateGradient);
                }
                Ok(BoundaryFrame::new(foot, unit(&g)?, delta))
            }
        }
    }
}

/// Exit distance along unit `u` from `y` (relative to the center) inside a
/// sphere of radius `r`; evaluated in the numerically stable form.
fn ray_exit_sphere(y: &Vector, u: &Vector, r: f64) -> f64 {
    let s = y.dot(u);
    let q = r * r - y.norm_squared(); // > 0 inside
    let disc = (s * s + q).sqrt();
    if s > 0.0 {
        q / (s + disc)
    } else {
        disc - s
    }
}

pub(crate) struct NearestBoundary {
    pub dist: f64,
    pub foot: Option<Point>,
    pub tie: bool,
}

impl Ellipsoid {
    pub fn semi_axes(&self) -> &[f64] {
        &self.axes
    }

    /// `S^{-1}`, the matrix of the defining quadratic form.
    pub fn inverse_shape(&self) -> &DMatrix<f64> {
        &self.inv_shape
    }

    /// Nearest boundary point via the secular equation in the principal
    /// frame. Handles the degenerate branches where the query point has
    /// zero component along the shortest axes (tie rings).
    pub(crate) fn nearest_boundary(&self, x: &Point) -> NearestBoundary {
        let d = self.center.len();
        let y = self.rot.transpose() * (x - &self.center);
        let a = &self.axes;
        let scale = a[d - 1];
        let zero_tol = 1e-13 * scale.max(y.norm());

        let active: Vec<usize> = (0..d).filter(|&i| y[i].abs() > zero_tol).collect();
        if active.is_empty() {
            // exact center: every direction ties
            return NearestBoundary {
                dist: a[0],
                foot: None,
                tie: true,
            };
        }

        let secular = |lambda: f64| -> f64 {
            active
                .iter()
                .map(|&i| {
                    let t = y[i] * a[i] / (a[i] * a[i] + lambda);
                    t * t
                })
                .sum::<f64>()
        };
        let inside = (0..d).map(|i| (y[i] / a[i]).powi(2)).sum::<f64>() < 1.0;
        let a_min_active = active.iter().map(|&i| a[i]).fold(f64::INFINITY, f64::min);

        let lambda = if inside {
            // root in (-a_min_active^2, 0)
            let pole = -a_min_active * a_min_active;
            let mut lo = pole * 0.5;
            let mut found = false;
            for _ in 0..2000 {
                if secular(lo) >= 1.0 {
                    found = true;
                    break;
                }
                lo = 0.5 * (lo + pole);
                if lo == pole {
                    break;
                }
            }
            if !found {
                lo = pole + (0.0 - pole) * 1e-15;
            }
            bisect_secular(&secular, lo, 0.0)
        } else {
            // root in (0, +inf)
            let mut hi = a_min_active * a_min_active;
            while secular(hi) > 1.0 {
                hi *= 2.0;
            }
            bisect_secular(&secular, 0.0, hi)
        };

        let mut foot_eigen = Vector::zeros(d);
        for &i in &active {
            foot_eigen[i] = y[i] * a[i] * a[i] / (a[i] * a[i] + lambda);
        }
        let mut dist_root = 0.0;
        for &i in &active {
            dist_root += (y[i] - foot_eigen[i]).powi(2);
        }
        let dist_root = dist_root.sqrt();

        let mut best = NearestBoundary {
            dist: dist_root,
            foot: Some(&self.center + &self.rot * foot_eigen),
            tie: false,
        };

        if inside {
            // degenerate candidates: feet with support on an inactive axis
            // shorter than every active one (tie rings)
            let mut seen: Vec<f64> = Vec::new();
            for i in 0..d {
                if active.contains(&i) || a[i] >= a_min_active {
                    continue;
                }
                if seen.iter().any(|s| (s - a[i]).abs() < 1e-14) {
                    continue;
                }
                seen.push(a[i]);
                let az2 = a[i] * a[i];
                let mut on_boundary = 0.0;
                let mut dist2 = 0.0;
                let mut valid = true;
                for &j in &active {
                    let denom = a[j] * a[j] - az2;
                    if denom.abs() < 1e-14 {
                        valid = false;
                        break;
                    }
                    let xi = y[j] * a[j] * a[j] / denom;
                    on_boundary += (xi / a[j]).powi(2);
                    dist2 += (y[j] - xi).powi(2);
                }
                if !valid {
                    continue;
                }
                let slack = 1.0 - on_boundary;
                if slack < 0.0 {
                    continue;
                }
                dist2 += az2 * slack;
                let dist = dist2.sqrt();
                if dist < best.dist - PROJECTION_TIE_TOL {
                    best = NearestBoundary {
                        dist,
                        foot: None,
                        tie: true,
                    };
                } else if (dist - best.dist).abs() <= PROJECTION_TIE_TOL {
                    best.tie = true;
                    best.foot = None;
                }
            }
        }
        best
    }
}

fn bisect_secular(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // f(lo) >= 1 >= f(hi), f decreasing
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) >= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl Polytope {
    pub fn interior_point(&self) -> &Point {
        &self.interior_point
    }

    /// Projection of an exterior point onto the closed polytope by Dykstra's
    /// alternating projections (exact for intersections of half-spaces).
    fn project_onto(&self, x: &Point) -> Point {
        let d = x.len();
        let m = self.faces.len();
        let mut y = x.clone();
        let mut corrections = vec![Vector::zeros(d); m];
        for _ in 0..5000 {
            let mut moved: f64 = 0.0;
            for (i, f) in self.faces.iter().enumerate() {
                let z = &y + &corrections[i];
                let violation = f.normal.dot(&z) - f.offset;
                let projected = if violation > 0.0 {
                    &z - violation * &f.normal
                } else {
                    z.clone()
                };
                corrections[i] = &z - &projected;
                moved = moved.max((&projected - &y).norm());
                y = projected;
            }
            if moved < 1e-13 {
                break;
            }
        }
        y
    }
}

/// Strictly interior point of the half-space intersection, found by
/// subgradient ascent on the minimum face margin.
fn chebyshev_like_center(faces: &[Face], d: usize) -> Result<Point> {
    let scale = faces.iter().map(|f| f.offset.abs()).fold(1.0, f64::max);
    let mut x = Vector::zeros(d);
    let mut best = x.clone();
    let mut best_margin = f64::NEG_INFINITY;
    for k in 0..4000 {
        let (margin, idx) = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.offset - f.normal.dot(&x), i))
            .fold(
                (f64::INFINITY, 0),
                |acc, m| if m.0 < acc.0 { m } else { acc },
            );
        if margin > best_margin {
            best_margin = margin;
            best = x.clone();
        }
        let step = scale / ((k + 1) as f64).sqrt();
        x -= step * &faces[idx].normal;
    }
    if best_margin <= 1e-9 * scale {
        return Err(Error::InvalidParameter(
            "polytope has empty interior".into(),
        ));
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// JSON descriptor format
// ---------------------------------------------------------------------------

/// Serializable mirror of [`Domain`]; the JSON format the CLI consumes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    HalfSpace {
        base: Vec<f64>,
        normal: Vec<f64>,
    },
    Slab {
        base: Vec<f64>,
        normal: Vec<f64>,
        half_width: f64,
    },
    Ellipsoid {
        center: Vec<f64>,
        shape: Vec<Vec<f64>>,
    },
    Polytope {
        faces: Vec<FaceSpec>,
    },
    Implicit {
        #[serde(flatten)]
        builtin: ImplicitBuiltin,
        dim: usize,
        bounding_radius: f64,
        #[serde(default = "default_true")]
        convex: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reach_fraction: Option<f64>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        fd_derivatives: bool,
    },
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FaceSpec {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl TryFrom<DomainSpec> for Domain {
    type Error = Error;

    fn try_from(spec: DomainSpec) -> Result<Self> {
        match spec {
            DomainSpec::Ball { center, radius } => {
                Domain::ball(Vector::from_vec(center), radius)
            }
            DomainSpec::HalfSpace { base, normal } => {
                Domain::half_space(Vector::from_vec(base), Vector::from_vec(normal))
            }
            DomainSpec::Slab {
                base,
                normal,
                half_width,
            } => Domain::slab(Vector::from_vec(base), Vector::from_vec(normal), half_width),
            DomainSpec::Ellipsoid { center, shape } => {
                let d = center.len();
                if shape.len() != d || shape.iter().any(|row| row.len() != d) {
                    return Err(Error::InvalidParameter(
                        "shape matrix must be d x d".into(),
                    ));
                }
                let m = DMatrix::from_fn(d, d, |i, j| shape[i][j]);
                Domain::ellipsoid(Vector::from_vec(center), m)
            }
            DomainSpec::Polytope { faces } => Domain::polytope(
                faces
                    .into_iter()
                    .map(|f| (Vector::from_vec(f.normal), f.offset))
                    .collect(),
            ),
            DomainSpec::Implicit {
                builtin,
                dim,
                bounding_radius,
                convex,
                reach_fraction,
                fd_derivatives,
            } => {
                let mut surface =
                    ImplicitSmooth::new(builtin, dim, bounding_radius, convex)?;
                if let Some(fr) = reach_fraction {
                    surface = surface.with_reach_fraction(fr);
                }
                surface = surface.with_fd_derivatives(fd_derivatives);
                Ok(Domain::implicit(surface))
            }
        }
    }
}

impl From<&Domain> for DomainSpec {
    fn from(d: &Domain) -> Self {
        match d {
            Domain::Ball(b) => DomainSpec::Ball {
                center: b.center.iter().copied().collect(),
                radius: b.radius,
            },
            Domain::HalfSpace(h) => DomainSpec::HalfSpace {
                base: h.base.iter().copied().collect(),
                normal: h.normal.iter().copied().collect(),
            },
            Domain::Slab(s) => DomainSpec::Slab {
                base: s.base.iter().copied().collect(),
                normal: s.normal.iter().copied().collect(),
                half_width: s.half_width,
            },
            Domain::Ellipsoid(e) => DomainSpec::Ellipsoid {
                center: e.center.iter().copied().collect(),
                shape: (0..e.shape.nrows())
                    .map(|i| (0..e.shape.ncols()).map(|j| e.shape[(i, j)]).collect())
                    .collect(),
            },
            Domain::Polytope(p) => DomainSpec::Polytope {
                faces: p
                    .faces
                    .iter()
                    .map(|f| FaceSpec {
                        normal: f.normal.iter().copied().collect(),
                        offset: f.offset,
                    })
                    .collect(),
            },
            Domain::Implicit(s) => DomainSpec::Implicit {
                builtin: s.builtin.clone(),
                dim: s.dim,
                bounding_radius: s.bounding_radius,
                convex: s.convex,
                reach_fraction: Some(s.reach_fraction),
                fd_derivatives: s.fd_derivatives,
            },
        }
    }
}

impl Serialize for Domain {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DomainSpec::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Domain {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let spec = DomainSpec::deserialize(deserializer)?;
        Domain::try_from(spec).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use approx::assert_relative_eq;

    #[test]
    fn membership_examples() {
        let ball = Domain::unit_ball(3);
        assert!(ball.contains(&point(&[0.0, 0.0, 0.0])).unwrap());
        assert!(!ball.contains(&point(&[1.0, 0.0, 0.0])).unwrap());
        let hs = Domain::half_space_x1(3);
        assert!(!hs.contains(&point(&[-1.0, 0.0, 0.0])).unwrap());
        assert!(hs.contains(&point(&[2.0, -5.0, 1.0])).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let ball = Domain::unit_ball(3);
        assert!(matches!(
            ball.contains(&point(&[0.0, 0.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ray_examples() {
        let ball = Domain::unit_ball(3);
        let t = ball
            .ray_boundary_distance(&point(&[0.0; 3]), &point(&[0.0, 1.0, 0.0]))
            .unwrap();
        assert_relative_eq!(t, 1.0, max_relative = 1e-12);
        let t = ball
            .ray_boundary_distance(&point(&[0.5, 0.0, 0.0]), &point(&[0.0, 1.0, 0.0]))
            .unwrap();
        assert_relative_eq!(t, 0.75f64.sqrt(), max_relative = 1e-12);
        let hs = Domain::half_space_x1(3);
        let t = hs
            .ray_boundary_distance(&point(&[2.0, 0.0, 0.0]), &point(&[1.0, 0.0, 0.0]))
            .unwrap();
        assert!(t.is_infinite());
    }

    #[test]
    fn line_examples() {
        let ball = Domain::unit_ball(3);
        let x = point(&[0.5, 0.0, 0.0]);
        assert_relative_eq!(
            ball.line_boundary_distance(&x, &point(&[1.0, 0.0, 0.0])).unwrap(),
            0.5,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            ball.line_boundary_distance(&x, &point(&[0.0, 1.0, 0.0])).unwrap(),
            0.75f64.sqrt(),
            max_relative = 1e-12
        );
        let slab = Domain::slab_x1(3, 1.0);
        assert!(slab
            .line_boundary_distance(&point(&[0.0; 3]), &point(&[0.0, 1.0, 0.0]))
            .unwrap()
            .is_infinite());
    }

    #[test]
    fn boundary_distance_examples() {
        let slab = Domain::slab_x1(2, 1.0);
        assert_relative_eq!(
            slab.boundary_distance(&point(&[0.3, 7.0])).unwrap(),
            0.7,
            max_relative = 1e-12
        );
        let ball = Domain::unit_ball(3);
        assert_relative_eq!(
            ball.boundary_distance(&point(&[0.5, 0.0, 0.0])).unwrap(),
            0.5,
            max_relative = 1e-12
        );
        // shape diag(1,1,0.25) has semi-axes (1,1,0.5)
        let shape = DMatrix::from_diagonal(&Vector::from_vec(vec![1.0, 1.0, 0.25]));
        let ell = Domain::ellipsoid(Vector::zeros(3), shape).unwrap();
        assert_relative_eq!(
            ell.boundary_distance(&point(&[0.0; 3])).unwrap(),
            0.5,
            max_relative = 1e-9
        );
    }

    #[test]
    fn signed_distance_examples() {
        let ball = Domain::unit_ball(2);
        assert_relative_eq!(ball.signed_distance(&point(&[0.0, 0.0])).unwrap(), -1.0);
        assert_relative_eq!(ball.signed_distance(&point(&[2.0, 0.0])).unwrap(), 1.0);
        let hs = Domain::half_space_x1(2);
        assert_relative_eq!(
            hs.signed_distance(&point(&[-0.25, 3.0])).unwrap(),
            0.25,
            max_relative = 1e-12
        );
    }

    #[test]
    fn frame_examples() {
        let ball = Domain::unit_ball(2);
        let f = ball.boundary_frame(&point(&[0.5, 0.0])).unwrap();
        assert_relative_eq!((f.foot.clone() - point(&[1.0, 0.0])).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!((f.normal.clone() - point(&[1.0, 0.0])).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(f.delta, 0.5, max_relative = 1e-12);

        let hs = Domain::half_space_x1(2);
        let f = hs.boundary_frame(&point(&[2.0, 3.0])).unwrap();
        assert_relative_eq!((f.foot.clone() - point(&[0.0, 3.0])).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!((f.normal.clone() - point(&[-1.0, 0.0])).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(f.delta, 2.0, max_relative = 1e-12);

        let slab = Domain::slab_x1(2, 1.0);
        assert!(matches!(
            slab.boundary_frame(&point(&[0.0, 5.0])),
            Err(Error::NonUniqueProjection(_))
        ));
        assert!(matches!(
            ball.boundary_frame(&point(&[0.0, 0.0])),
            Err(Error::NonUniqueProjection(_))
        ));
    }

    #[test]
    fn ellipsoid_tie_ring_detected() {
        // prolate ellipsoid, semi-axes (2, 1, 1): points on the long axis
        // inside the evolute have a ring of nearest feet
        let ell = Domain::ellipsoid_from_semi_axes(Vector::zeros(3), &[2.0, 1.0, 1.0]).unwrap();
        let x = point(&[0.5, 0.0, 0.0]);
        let d = ell.boundary_distance(&x).unwrap();
        // foot ring: xi_1 = 2/3, radial slack gives dist^2 = 1/36 + 8/9
        let expected = (1.0 / 36.0 + 8.0 / 9.0f64).sqrt();
        assert_relative_eq!(d, expected, max_relative = 1e-9);
        assert!(matches!(
            ell.boundary_frame(&x),
            Err(Error::NonUniqueProjection(_))
        ));
        // beyond the evolute cusp the vertex is the unique nearest point
        let x = point(&[1.9, 0.0, 0.0]);
        assert_relative_eq!(ell.boundary_distance(&x).unwrap(), 0.1, max_relative = 1e-9);
        let f = ell.boundary_frame(&x).unwrap();
        assert_relative_eq!((f.foot.clone() - point(&[2.0, 0.0, 0.0])).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn cube_geometry() {
        let cube = Domain::cube(3, 0.5).unwrap();
        assert!(cube.contains(&point(&[0.4, -0.4, 0.0])).unwrap());
        assert!(!cube.contains(&point(&[0.6, 0.0, 0.0])).unwrap());
        let x = point(&[0.2, 0.1, -0.1]);
        assert_relative_eq!(cube.boundary_distance(&x).unwrap(), 0.3, max_relative = 1e-12);
        let f = cube.boundary_frame(&x).unwrap();
        assert_relative_eq!((f.normal.clone() - point(&[1.0, 0.0, 0.0])).norm(), 0.0, epsilon = 1e-12);
        // exterior signed distance to a corner region
        let outside = point(&[1.0, 1.0, 1.0]);
        let sd = cube.signed_distance(&outside).unwrap();
        assert_relative_eq!(sd, 3.0f64.sqrt() * 0.5, max_relative = 1e-6);
    }

    #[test]
    fn json_round_trip() {
        let ell = Domain::ellipsoid_from_semi_axes(point(&[0.1, -0.2]), &[1.0, 0.5]).unwrap();
        let text = serde_json::to_string(&ell).unwrap();
        let back: Domain = serde_json::from_str(&text).unwrap();
        let x = point(&[0.3, 0.1]);
        assert_relative_eq!(
            ell.boundary_distance(&x).unwrap(),
            back.boundary_distance(&x).unwrap(),
            max_relative = 1e-14
        );
        let json = r#"{"kind":"ball","center":[0.0,0.0],"radius":1.0}"#;
        let ball: Domain = serde_json::from_str(json).unwrap();
        assert_eq!(ball.kind_name(), "ball");
    }
}
