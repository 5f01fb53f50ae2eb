//! Numerical approximation of intrinsic (pseudo)distances: quadrature length
//! functionals on polylines, sampled-graph shortest paths, local path
//! relaxation, and the two curve constructions with known length behaviour
//! (straight normal fibers and inward-offset boundary paths).

mod graph;

pub use graph::{graph_distance, GraphConfig, GraphDistance, PathGraph};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryFrame, Domain, Point};
use crate::metrics::MetricEvaluator;

/// Interior parameters sampled per segment when checking that a segment
/// stays inside the domain.
const SEGMENT_MEMBERSHIP_SAMPLES: usize = 16;

/// Piecewise-linear curve with interior vertices; the discrete stand-in for
/// piecewise smooth curves.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Point>,
}

impl Polyline {
    /// At least two points, consecutive points distinct, all finite and of
    /// one dimension.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPolyline("need at least two points".into()));
        }
        let d = points[0].len();
        for p in &points {
            if p.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: p.len(),
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidPolyline("non-finite coordinate".into()));
            }
        }
        for w in points.windows(2) {
            if (&w[1] - &w[0]).norm() == 0.0 {
                return Err(Error::InvalidPolyline(
                    "consecutive points must be distinct".into(),
                ));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    pub fn euclidean_length(&self) -> f64 {
        self.points.windows(2).map(|w| (&w[1] - &w[0]).norm()).sum()
    }

    /// Every vertex interior and every segment inside the domain (sampled
    /// at 16 interior parameters).
    pub fn validate_in(&self, domain: &Domain) -> Result<()> {
        for p in &self.points {
            if !domain.contains(p)? {
                return Err(Error::OutsideDomain);
            }
        }
        if domain.is_convex() {
            return Ok(()); // segments between interior points stay interior
        }
        for w in self.points.windows(2) {
            for s in 1..=SEGMENT_MEMBERSHIP_SAMPLES {
                let t = s as f64 / (SEGMENT_MEMBERSHIP_SAMPLES + 1) as f64;
                let p = &w[0] + t * (&w[1] - &w[0]);
                if !domain.contains(&p)? {
                    return Err(Error::OutsideDomain);
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Polyline {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = self
            .points
            .iter()
            .map(|p| p.iter().copied().collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polyline {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<f64>> = Vec::deserialize(d)?;
        Polyline::new(
            rows.into_iter()
                .map(|r| Point::from_vec(r))
                .collect::<Vec<_>>(),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    Midpoint,
    Gauss5,
}

/// How segment integrals `int F(gamma, gamma') dt` are discretized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rule: QuadratureRule,
    pub subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rule: QuadratureRule::Gauss5,
            subdivisions: 32,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rule: QuadratureRule, subdivisions: usize) -> Result<Self> {
        if subdivisions == 0 {
            return Err(Error::InvalidParameter(
                "need at least one subdivision".into(),
            ));
        }
        Ok(Self { rule, subdivisions })
    }

    /// Nodes and weights on [0, 1].
    fn pattern(&self) -> &'static [(f64, f64)] {
        const MID: [(f64, f64); 1] = [(0.5, 1.0)];
        // Gauss-Legendre 5 on [0,1]
        const G5: [(f64, f64); 5] = [
            (0.046910077030668074, 0.11846344252809454),
            (0.23076534494715845, 0.23931433524968324),
            (0.5, 0.28444444444444444),
            (0.7692346550528415, 0.23931433524968324),
            (0.9530899229693319, 0.11846344252809454),
        ];
        match self.rule {
            QuadratureRule::Midpoint => &MID,
            QuadratureRule::Gauss5 => &G5,
        }
    }
}

/// Length of a polyline under a metric evaluator: segments are traversed at
/// constant speed, so each contributes `int_0^1 F(p + t (q-p), q-p) dt`.
pub fn path_length(
    metric: &MetricEvaluator,
    path: &Polyline,
    quad: &QuadratureSpec,
) -> Result<f64> {
    path.validate_in(metric.domain())?;
    let mut total = 0.0;
    for w in path.points().windows(2) {
        total += segment_length(metric, &w[0], &w[1], quad)?;
    }
    Ok(total)
}

pub(crate) fn segment_length(
    metric: &MetricEvaluator,
    from: &Point,
    to: &Point,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let chord = to - from;
    let n = quad.subdivisions as f64;
    let mut acc = 0.0;
    for sub in 0..quad.subdivisions {
        let left = sub as f64 / n;
        for &(node, weight) in quad.pattern() {
            let t = left + node / n;
            let p = from + t * &chord;
            acc += weight / n * metric.evaluate(&p, &chord)?;
        }
    }
    Ok(acc)
}

/// Coordinate-descent improvement of a polyline: each interior vertex is
/// moved by axis-aligned pattern search (step halving from `0.1 * delta` at
/// the vertex) to shrink the sum of its two adjacent segment lengths. The
/// returned length never exceeds the input length, and all iterates stay
/// interior. `iters = 0` returns the input unchanged.
pub fn relax_path(
    metric: &MetricEvaluator,
    path: &Polyline,
    quad: &QuadratureSpec,
    iters: usize,
) -> Result<Polyline> {
    path.validate_in(metric.domain())?;
    let domain = metric.domain();
    let d = path.points()[0].len();
    let mut pts = path.points().to_vec();
    for _ in 0..iters {
        for idx in 1..pts.len() - 1 {
            let mut cost = segment_length(metric, &pts[idx - 1], &pts[idx], quad)?
                + segment_length(metric, &pts[idx], &pts[idx + 1], quad)?;
            let mut step = 0.1 * domain.boundary_distance(&pts[idx])?;
            let min_step = step * 2.0f64.powi(-10);
            while step > min_step {
                let mut improved = false;
                for axis in 0..d {
                    for sign in [1.0, -1.0] {
                        let mut cand = pts[idx].clone();
                        cand[axis] += sign * step;
                        if !domain.contains(&cand)? {
                            continue;
                        }
                        if cand == pts[idx - 1] || cand == pts[idx + 1] {
                            continue;
                        }
                        if !segment_inside(domain, &pts[idx - 1], &cand)?
                            || !segment_inside(domain, &cand, &pts[idx + 1])?
                        {
                            continue;
                        }
                        let cand_cost = segment_length(metric, &pts[idx - 1], &cand, quad)?
                            + segment_length(metric, &cand, &pts[idx + 1], quad)?;
                        if cand_cost < cost {
                            pts[idx] = cand;
                            cost = cand_cost;
                            improved = true;
                        }
                    }
                }
                if !improved {
                    step *= 0.5;
                }
            }
        }
    }
    Polyline::new(pts)
}

pub(crate) fn segment_inside(domain: &Domain, from: &Point, to: &Point) -> Result<bool> {
    if domain.is_convex() {
        return Ok(true);
    }
    for s in 1..=SEGMENT_MEMBERSHIP_SAMPLES {
        let t = s as f64 / (SEGMENT_MEMBERSHIP_SAMPLES + 1) as f64;
        let p = from + t * (to - from);
        if !domain.contains(&p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Length of the straight segment along the inward normal of a frame
/// between boundary depths `delta1` and `delta2` (a piece of the projection
/// fiber). Both depths must stay in the collar where the fiber projects
/// back to the same foot.
pub fn normal_segment_length(
    metric: &MetricEvaluator,
    frame: &BoundaryFrame,
    delta1: f64,
    delta2: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    for delta in [delta1, delta2] {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidParameter(
                "fiber depths must be positive".into(),
            ));
        }
    }
    if delta1 == delta2 {
        return Ok(0.0);
    }
    let domain = metric.domain();
    let endpoints: Vec<Point> = [delta1, delta2]
        .iter()
        .map(|d| &frame.foot - *d * &frame.normal)
        .collect();
    for p in &endpoints {
        if !domain.contains(p)? {
            return Err(Error::CollarViolation(
                "fiber endpoint leaves the domain".into(),
            ));
        }
        let check = domain.boundary_frame(p)?;
        if (&check.foot - &frame.foot).norm() > 1e-6 {
            return Err(Error::CollarViolation(
                "fiber endpoint projects to a different foot".into(),
            ));
        }
    }
    path_length(
        metric,
        &Polyline::new(endpoints)?,
        quad,
    )
}

/// Polyline at constant boundary distance `delta0` joining two equal-depth
/// frames: a boundary path from one foot to the other (great-circle,
/// straight-face, or chord-projection depending on the variant), offset
/// inward by `delta0` along the outward normal. Every vertex sits at
/// boundary distance `delta0` up to 1e-6.
pub fn equidistant_path(
    domain: &Domain,
    fx: &BoundaryFrame,
    fy: &BoundaryFrame,
    delta0: f64,
    steps: usize,
) -> Result<Polyline> {
    if steps == 0 {
        return Err(Error::InvalidParameter("need at least one step".into()));
    }
    for f in [fx, fy] {
        if (f.delta - delta0).abs() > 1e-8 {
            return Err(Error::InvalidParameter(format!(
                "frame depth {:.3e} does not match delta0 {delta0:.3e}",
                f.delta
            )));
        }
    }
    let feet = boundary_path(domain, &fx.foot, &fy.foot, steps)?;
    let mut vertices = Vec::with_capacity(feet.len());
    for foot in &feet {
        let n = domain.outward_normal_at(foot)?;
        let v = foot - delta0 * &n;
        let dist = domain.boundary_distance(&v)?;
        if (dist - delta0).abs() > 1e-6 {
            return Err(Error::CollarViolation(format!(
                "offset vertex has boundary distance {dist:.3e}, wanted {delta0:.3e}"
            )));
        }
        vertices.push(v);
    }
    vertices.dedup_by(|a, b| (&*a - &*b).norm() == 0.0);
    Polyline::new(vertices)
}

/// Points tracing the boundary from one foot to another.
fn boundary_path(domain: &Domain, from: &Point, to: &Point, steps: usize) -> Result<Vec<Point>> {
    let mut feet = Vec::with_capacity(steps + 1);
    match domain {
        Domain::Ball(b) => {
            let a = from - &b.center;
            let c = to - &b.center;
            let cos = (a.dot(&c) / (a.norm() * c.norm())).clamp(-1.0, 1.0);
            let angle = cos.acos();
            if (std::f64::consts::PI - angle).abs() < 1e-9 {
                return Err(Error::InvalidParameter(
                    "antipodal feet: great-circle path not unique".into(),
                ));
            }
            for s in 0..=steps {
                let t = s as f64 / steps as f64;
                // slerp with linear fallback for nearly equal feet
                let p = if angle < 1e-12 {
                    a.clone()
                } else {
                    let w1 = ((1.0 - t) * angle).sin() / angle.sin();
                    let w2 = (t * angle).sin() / angle.sin();
                    w1 * &a + w2 * &c
                };
                feet.push(&b.center + b.radius * p.normalize());
            }
        }
        Domain::HalfSpace(_) => {
            for s in 0..=steps {
                let t = s as f64 / steps as f64;
                feet.push(from + t * (to - from));
            }
        }
        Domain::Slab(s) => {
            let side_from = (from - &s.base).dot(&s.normal);
            let side_to = (to - &s.base).dot(&s.normal);
            if side_from * side_to < 0.0 {
                return Err(Error::InvalidParameter(
                    "feet on opposite slab faces".into(),
                ));
            }
            for k in 0..=steps {
                let t = k as f64 / steps as f64;
                feet.push(from + t * (to - from));
            }
        }
        Domain::Polytope(p) => {
            let face_of = |pt: &Point| -> Option<usize> {
                let mut best = None;
                for (i, f) in p.faces.iter().enumerate() {
                    if (f.normal.dot(pt) - f.offset).abs() <= 1e-8 {
                        if best.is_some() {
                            return None; // edge point
                        }
                        best = Some(i);
                    }
                }
                best
            };
            let f1 = face_of(from);
            let f2 = face_of(to);
            if f1.is_none() || f1 != f2 {
                return Err(Error::InvalidParameter(
                    "feet must lie on one polytope face".into(),
                ));
            }
            for k in 0..=steps {
                let t = k as f64 / steps as f64;
                feet.push(from + t * (to - from));
            }
        }
        Domain::Ellipsoid(_) | Domain::Implicit(_) => {
            // chord between the feet, projected back to the boundary
            let max_jump = 4.0 * (to - from).norm() / steps as f64 + 1e-12;
            let mut prev: Option<Point> = None;
            for k in 0..=steps {
                let t = k as f64 / steps as f64;
                let z = from + t * (to - from);
                let foot = project_to_boundary(domain, &z)?;
                if let Some(p) = &prev {
                    if (&foot - p).norm() > max_jump {
                        return Err(Error::InvalidParameter(
                            "feet too far apart for a single boundary chart".into(),
                        ));
                    }
                }
                prev = Some(foot.clone());
                feet.push(foot);
            }
        }
    }
    Ok(feet)
}

fn project_to_boundary(domain: &Domain, z: &Point) -> Result<Point> {
    // chord endpoints and everything within roundoff of the boundary pass
    // through unchanged
    if domain.signed_distance(z)?.abs() <= 1e-12 {
        return Ok(z.clone());
    }
    if domain.contains(z)? {
        Ok(domain.boundary_frame(z)?.foot)
    } else {
        Ok(z.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use crate::metrics::MetricKind;
    use approx::assert_relative_eq;

    #[test]
    fn polyline_validation() {
        assert!(Polyline::new(vec![point(&[0.0, 0.0])]).is_err());
        assert!(Polyline::new(vec![point(&[0.0, 0.0]), point(&[0.0, 0.0])]).is_err());
        let p = Polyline::new(vec![point(&[0.0, 0.0]), point(&[0.5, 0.0])]).unwrap();
        assert_eq!(p.segments(), 1);
        assert!(p.validate_in(&Domain::unit_ball(2)).is_ok());
        let q = Polyline::new(vec![point(&[0.0, 0.0]), point(&[2.0, 0.0])]).unwrap();
        assert!(q.validate_in(&Domain::unit_ball(2)).is_err());
    }

    #[test]
    fn fiber_integral_matches_log_closed_form() {
        // half-space, q^(k) along the normal from depth 0.01 to 1: log(100)/2
        let hs = Domain::half_space_x1(3);
        let metric =
            MetricEvaluator::new(MetricKind::QuasiHyperbolic { k: 2 }, hs.clone()).unwrap();
        let frame = hs.boundary_frame(&point(&[0.5, 0.0, 0.0])).unwrap();
        let exact = 0.5 * 100.0f64.ln();
        // default resolution resolves the near-boundary blowup to ~1e-5
        let quad = QuadratureSpec::default();
        let len = normal_segment_length(&metric, &frame, 0.01, 1.0, &quad).unwrap();
        assert_relative_eq!(len, exact, max_relative = 1e-4);
        // refined subdivisions pin it down
        let fine = QuadratureSpec::new(QuadratureRule::Gauss5, 512).unwrap();
        let len = normal_segment_length(&metric, &frame, 0.01, 1.0, &fine).unwrap();
        assert_relative_eq!(len, exact, max_relative = 1e-9);
        assert_eq!(
            normal_segment_length(&metric, &frame, 0.3, 0.3, &quad).unwrap(),
            0.0
        );
    }

    #[test]
    fn hilbert_chord_length_matches_cross_ratio() {
        let disk = Domain::unit_ball(2);
        let metric = MetricEvaluator::new(MetricKind::KobayashiHilbert, disk.clone()).unwrap();
        let path = Polyline::new(vec![point(&[0.0, 0.0]), point(&[0.5, 0.0])]).unwrap();
        let len = path_length(&metric, &path, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(len, 0.5 * 3.0f64.ln(), epsilon = 1e-8);
    }

    #[test]
    fn path_length_invariant_under_collinear_split() {
        let disk = Domain::unit_ball(2);
        let metric = MetricEvaluator::new(MetricKind::KobayashiHilbert, disk).unwrap();
        let quad = QuadratureSpec::default();
        let whole = Polyline::new(vec![point(&[-0.3, 0.1]), point(&[0.5, 0.3])]).unwrap();
        let split = Polyline::new(vec![
            point(&[-0.3, 0.1]),
            point(&[0.1, 0.2]),
            point(&[0.5, 0.3]),
        ])
        .unwrap();
        let a = path_length(&metric, &whole, &quad).unwrap();
        let b = path_length(&metric, &split, &quad).unwrap();
        assert_relative_eq!(a, b, epsilon = 1e-10);
    }

    #[test]
    fn relax_straightens_a_kink() {
        let disk = Domain::unit_ball(2);
        let metric = MetricEvaluator::new(MetricKind::KobayashiHilbert, disk).unwrap();
        let quad = QuadratureSpec::new(QuadratureRule::Gauss5, 8).unwrap();
        let kinked = Polyline::new(vec![
            point(&[0.0, 0.0]),
            point(&[0.25, 0.3]),
            point(&[0.5, 0.0]),
        ])
        .unwrap();
        let before = path_length(&metric, &kinked, &quad).unwrap();
        let same = relax_path(&metric, &kinked, &quad, 0).unwrap();
        assert_eq!(same.points(), kinked.points());
        let relaxed = relax_path(&metric, &kinked, &quad, 20).unwrap();
        let after = path_length(&metric, &relaxed, &quad).unwrap();
        assert!(after <= before + 1e-12);
        let target = 0.5 * 3.0f64.ln();
        assert!(after - target < 0.02 * target, "after={after}, target={target}");
        // a straight chord stays put (chords already minimize)
        let chord = Polyline::new(vec![
            point(&[0.0, 0.0]),
            point(&[0.25, 0.0]),
            point(&[0.5, 0.0]),
        ])
        .unwrap();
        let c0 = path_length(&metric, &chord, &quad).unwrap();
        let c1 = path_length(&metric, &relax_path(&metric, &chord, &quad, 4).unwrap(), &quad)
            .unwrap();
        assert!(c1 <= c0 + 1e-12);
        assert!((c0 - c1).abs() < 1e-9);
    }

    #[test]
    fn equidistant_path_on_sphere_and_half_space() {
        let ball = Domain::unit_ball(3);
        let fx = ball.boundary_frame(&point(&[0.9, 0.0, 0.0])).unwrap();
        let fy = ball.boundary_frame(&point(&[0.0, 0.9, 0.0])).unwrap();
        let path = equidistant_path(&ball, &fx, &fy, 0.1, 24).unwrap();
        for p in path.points() {
            assert_relative_eq!(p.norm(), 0.9, epsilon = 1e-8);
        }
        let hs = Domain::half_space_x1(2);
        let fx = hs.boundary_frame(&point(&[1.0, 0.0])).unwrap();
        let fy = hs.boundary_frame(&point(&[1.0, 3.0])).unwrap();
        let path = equidistant_path(&hs, &fx, &fy, 1.0, 4).unwrap();
        for p in path.points() {
            assert_relative_eq!(p[0], 1.0, epsilon = 1e-12);
        }
    }
}
