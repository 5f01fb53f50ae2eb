//! The Finsler metrics under study: Beltrami-Klein, Funk, Kobayashi-Hilbert,
//! the k-quasi-hyperbolic family with its subspace optimizer, the half-space
//! minimal-metric closed form, two-sided bound templates, and the boundary
//! convexity classifier.

mod classify;
mod delta_k;

pub use classify::{classify_boundary_point, BoundaryClassification};
pub use delta_k::{delta_k, delta_k_numeric, q_from_delta, q_k, DeltaKOptions, DeltaKOutcome, SubspaceFrame};

use crate::error::{Error, Result};
use crate::geometry::{unit, BoundaryFrame, Domain, Point, Vector};

/// Beltrami-Klein metric of a Euclidean ball: the Hilbert metric of the ball
/// in closed form,
/// `CK(x,v) = sqrt(((1-|x|^2)|v|^2 + <x,v>^2) / (1-|x|^2)^2)`
/// on the unit ball, transported to a general ball by translation and
/// dilation (`CK_{B_r}(x, v) = r^{-1} CK((x-c)/r, v)`).
pub fn beltrami_klein(ball: &Domain, x: &Point, v: &Vector) -> Result<f64> {
    let Domain::Ball(b) = ball else {
        return Err(Error::Unsupported(
            "beltrami_klein needs a ball domain".into(),
        ));
    };
    if !ball.contains(x)? {
        return Err(Error::OutsideDomain);
    }
    let y = (x - &b.center) / b.radius;
    let one_minus = 1.0 - y.norm_squared();
    let dot = y.dot(v);
    let num = one_minus * v.norm_squared() + dot * dot;
    Ok((num.sqrt() / one_minus) / b.radius)
}

/// Funk metric: `|v|` divided by the exit distance of the ray from `x` in
/// direction `v`; zero when the ray never leaves the domain (`sup {} = 0`).
/// Positively homogeneous but not symmetric in `v`.
pub fn funk(domain: &Domain, x: &Point, v: &Vector) -> Result<f64> {
    let speed = v.norm();
    if speed == 0.0 {
        // still validate the base point so errors do not depend on v
        if !domain.contains(x)? {
            return Err(Error::OutsideDomain);
        }
        return Ok(0.0);
    }
    let t = domain.ray_boundary_distance(x, v)?;
    if t.is_infinite() {
        Ok(0.0)
    } else {
        Ok(speed / t)
    }
}

/// Kobayashi-Hilbert metric: the symmetrization
/// `k(x,v) = (Funk(x,v) + Funk(x,-v)) / 2`. Equals the Hilbert metric on
/// convex domains and the Beltrami-Klein metric on balls.
pub fn kobayashi_hilbert(domain: &Domain, x: &Point, v: &Vector) -> Result<f64> {
    Ok(0.5 * (funk(domain, x, v)? + funk(domain, x, &(-v))?))
}

/// Kobayashi-Hilbert metric of the intersection of two domains, via the ray
/// form: the exit distance of the intersection is the smaller of the two
/// exit distances.
pub fn kobayashi_hilbert_intersection(
    d1: &Domain,
    d2: &Domain,
    x: &Point,
    v: &Vector,
) -> Result<f64> {
    let speed = v.norm();
    if speed == 0.0 {
        return Ok(0.0);
    }
    let one_side = |dir: &Vector| -> Result<f64> {
        let t = d1
            .ray_boundary_distance(x, dir)?
            .min(d2.ray_boundary_distance(x, dir)?);
        Ok(if t.is_infinite() { 0.0 } else { speed / t })
    };
    let u = unit(v)?;
    Ok(0.5 * (one_side(&u)? + one_side(&(-&u))?))
}

/// Hilbert distance between interior points of a convex domain via the
/// cross-ratio of the chord through them:
/// `H(x,y) = log((|a-y| |b-x|) / (|a-x| |b-y|)) / 2` with `a`, `b` the chord
/// exits beyond `x` and `y`. Falls back to the one-sided limit when the
/// chord exits on one side only, and to `0` when it never exits (the metric
/// is only a pseudodistance there).
pub fn hilbert_distance_closed_form(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    if !domain.is_convex() {
        return Err(Error::Unsupported(
            "cross-ratio Hilbert distance needs a convex domain".into(),
        ));
    }
    if !domain.contains(x)? {
        return Err(Error::OutsideDomain);
    }
    if !domain.contains(y)? {
        return Err(Error::OutsideDomain);
    }
    let chord = y - x;
    let len = chord.norm();
    if len == 0.0 {
        return Ok(0.0);
    }
    let u = chord / len;
    let t_a = domain.ray_boundary_distance(x, &(-&u))?;
    let t_b = domain.ray_boundary_distance(y, &u)?;
    Ok(match (t_a.is_finite(), t_b.is_finite()) {
        (true, true) => 0.5 * (((t_a + len) * (t_b + len)) / (t_a * t_b)).ln(),
        (true, false) => 0.5 * ((t_a + len) / t_a).ln(),
        (false, true) => 0.5 * ((t_b + len) / t_b).ln(),
        (false, false) => 0.0,
    })
}

/// `q^(k)` on the half-space `{x_1 > 0}` in closed form: `|v_1| / (2 x_1)`,
/// independent of `k` for `k <= d-1`.
pub fn half_space_qk_closed_form(x: &Point, v: &Vector, k: usize) -> Result<f64> {
    let d = x.len();
    if v.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: v.len(),
        });
    }
    if x[0] <= 0.0 {
        return Err(Error::OutsideDomain);
    }
    if k == 0 || k >= d {
        return Err(Error::InvalidParameter(format!(
            "closed form needs 1 <= k <= d-1, got k={k}, d={d}"
        )));
    }
    Ok(v[0].abs() / (2.0 * x[0]))
}

/// Minimal metric of the half-space `{x_1 > 0}`: `|v_N| / (2 delta) =
/// |v_1| / (2 x_1)`.
pub fn half_space_minimal(x: &Point, v: &Vector) -> Result<f64> {
    if v.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: v.len(),
        });
    }
    if x[0] <= 0.0 {
        return Err(Error::OutsideDomain);
    }
    Ok(v[0].abs() / (2.0 * x[0]))
}

/// Lower bound expression for the ball metric bracket:
/// `sqrt(|v_N|^2/(4 d^2) + |v_T|^2/(2 r d))` at boundary distance `d` in a
/// ball of radius `r`.
pub fn ball_lower_bound_expr(radius: f64, delta: f64, v_n: f64, v_t: f64) -> f64 {
    (v_n * v_n / (4.0 * delta * delta) + v_t * v_t / (2.0 * radius * delta)).sqrt()
}

/// Upper bound expression for the ball metric bracket:
/// `sqrt((1+3d/r)|v_N|^2/(4 d^2) + (1+d/r)|v_T|^2/(2 r d))`.
pub fn ball_upper_bound_expr(radius: f64, delta: f64, v_n: f64, v_t: f64) -> f64 {
    ((1.0 + 3.0 * delta / radius) * v_n * v_n / (4.0 * delta * delta)
        + (1.0 + delta / radius) * v_t * v_t / (2.0 * radius * delta))
        .sqrt()
}

/// Which side of a two-sided boundary estimate a template evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

/// Template for two-sided boundary estimates with a power modulus
/// `omega(t) = omega0 * t^alpha`:
///
/// * lower: `max((1-omega(d)) |v_N|/(2d), c_lower |v_T|/sqrt(d))`
/// * upper: `(1+omega(d)) |v_N|/(2d) + c_upper |v_T|/sqrt(d)`
///
/// `alpha > 0` keeps `omega(u)/u` integrable at `0` (the Dini condition the
/// estimates require).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundTemplate {
    pub omega0: f64,
    pub alpha: f64,
    pub c_lower: f64,
    pub c_upper: f64,
}

impl BoundTemplate {
    pub fn new(omega0: f64, alpha: f64, c_lower: f64, c_upper: f64) -> Result<Self> {
        if omega0 < 0.0 || !omega0.is_finite() {
            return Err(Error::InvalidParameter("omega0 must be >= 0".into()));
        }
        if alpha <= 0.0 || !alpha.is_finite() {
            return Err(Error::InvalidParameter(
                "alpha must be positive (Dini condition)".into(),
            ));
        }
        if c_lower <= 0.0 || c_upper < c_lower {
            return Err(Error::InvalidParameter(
                "need 0 < c_lower <= c_upper".into(),
            ));
        }
        Ok(Self {
            omega0,
            alpha,
            c_lower,
            c_upper,
        })
    }

    pub fn omega(&self, t: f64) -> f64 {
        self.omega0 * t.powf(self.alpha)
    }
}

/// Evaluate one side of a bound template at a boundary frame.
pub fn bound_template_eval(
    template: &BoundTemplate,
    side: BoundSide,
    frame: &BoundaryFrame,
    v: &Vector,
) -> Result<f64> {
    let delta = frame.delta;
    let w = template.omega(delta);
    let v_n = frame.normal_norm(v);
    let v_t = frame.tangential_norm(v);
    match side {
        BoundSide::Lower => {
            if 1.0 - w <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "lower template degenerate: omega({delta:.3e}) = {w:.3e} >= 1"
                )));
            }
            Ok(((1.0 - w) * v_n / (2.0 * delta)).max(template.c_lower * v_t / delta.sqrt()))
        }
        BoundSide::Upper => {
            Ok((1.0 + w) * v_n / (2.0 * delta) + template.c_upper * v_t / delta.sqrt())
        }
    }
}

/// Upper bound for any metric dominated by ball metrics: the Beltrami-Klein
/// metric of the ball of radius `eps` internally tangent at the projection
/// foot, evaluated at `(x, v)`. Requires `delta < eps` so that `x` lies in
/// the tangent ball.
pub fn tangent_ball_upper_bound(
    frame: &BoundaryFrame,
    v: &Vector,
    eps: f64,
) -> Result<f64> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    if frame.delta >= eps {
        return Err(Error::CollarViolation(format!(
            "delta {:.3e} not below tangent radius {:.3e}",
            frame.delta, eps
        )));
    }
    let center = &frame.foot - eps * &frame.normal;
    let ball = Domain::ball(center, eps)?;
    beltrami_klein(&ball, &frame.point(), v)
}

/// A named Finsler metric bound to a domain.
#[derive(Debug, Clone)]
pub enum MetricKind {
    BeltramiKlein,
    Funk,
    KobayashiHilbert,
    QuasiHyperbolic { k: usize },
    HalfSpaceMinimal,
    BoundTemplate { template: BoundTemplate, side: BoundSide },
}

/// Evaluator for `F(x, v)`. Immutable after construction; carries a
/// symmetry flag so the intrinsic-distance engine knows whether edges are
/// bidirectional with equal weight (false only for Funk).
#[derive(Debug, Clone)]
pub struct MetricEvaluator {
    kind: MetricKind,
    domain: Domain,
    delta_k_options: DeltaKOptions,
}

impl MetricEvaluator {
    pub fn new(kind: MetricKind, domain: Domain) -> Result<Self> {
        match &kind {
            MetricKind::BeltramiKlein => {
                if !matches!(domain, Domain::Ball(_)) {
                    return Err(Error::Unsupported(
                        "beltrami-klein is the ball metric; use kh for other domains".into(),
                    ));
                }
            }
            MetricKind::HalfSpaceMinimal => {
                if !matches!(domain, Domain::HalfSpace(_)) {
                    return Err(Error::Unsupported(
                        "hs-min is defined on half-spaces".into(),
                    ));
                }
            }
            MetricKind::QuasiHyperbolic { k } => {
                if *k == 0 || *k > domain.dim() {
                    return Err(Error::InvalidParameter(format!(
                        "qk order must lie in 1..={}",
                        domain.dim()
                    )));
                }
            }
            _ => {}
        }
        Ok(Self {
            kind,
            domain,
            delta_k_options: DeltaKOptions::default(),
        })
    }

    pub fn with_delta_k_options(mut self, options: DeltaKOptions) -> Self {
        self.delta_k_options = options;
        self
    }

    pub fn kind(&self) -> &MetricKind {
        &self.kind
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Whether `F(x, v) = F(x, -v)`; false only for the Funk metric.
    pub fn symmetric(&self) -> bool {
        !matches!(self.kind, MetricKind::Funk)
    }

    pub fn evaluate(&self, x: &Point, v: &Vector) -> Result<f64> {
        match &self.kind {
            MetricKind::BeltramiKlein => beltrami_klein(&self.domain, x, v),
            MetricKind::Funk => funk(&self.domain, x, v),
            MetricKind::KobayashiHilbert => kobayashi_hilbert(&self.domain, x, v),
            MetricKind::QuasiHyperbolic { k } => {
                if v.norm() == 0.0 {
                    if !self.domain.contains(x)? {
                        return Err(Error::OutsideDomain);
                    }
                    return Ok(0.0);
                }
                q_k(&self.domain, x, v, *k, &self.delta_k_options)
            }
            MetricKind::HalfSpaceMinimal => {
                let Domain::HalfSpace(h) = &self.domain else {
                    unreachable!("validated at construction")
                };
                if !self.domain.contains(x)? {
                    return Err(Error::OutsideDomain);
                }
                let delta = -(x - &h.base).dot(&h.normal);
                Ok(v.dot(&h.normal).abs() / (2.0 * delta))
            }
            MetricKind::BoundTemplate { template, side } => {
                let frame = self.domain.boundary_frame(x)?;
                bound_template_eval(template, *side, &frame, v)
            }
        }
    }

    /// Parse a selection string: `bk`, `funk`, `kh`, `qk:<k>`, `hs-min`, or
    /// `tmpl:<lower|upper>:<omega0>:<alpha>:<c1>:<C1>`.
    pub fn parse(selection: &str, domain: Domain) -> Result<Self> {
        let kind = parse_metric_kind(selection)?;
        MetricEvaluator::new(kind, domain)
    }

    /// Selection string that parses back to this metric.
    pub fn selection_string(&self) -> String {
        match &self.kind {
            MetricKind::BeltramiKlein => "bk".into(),
            MetricKind::Funk => "funk".into(),
            MetricKind::KobayashiHilbert => "kh".into(),
            MetricKind::QuasiHyperbolic { k } => format!("qk:{k}"),
            MetricKind::HalfSpaceMinimal => "hs-min".into(),
            MetricKind::BoundTemplate { template, side } => format!(
                "tmpl:{}:{}:{}:{}:{}",
                match side {
                    BoundSide::Lower => "lower",
                    BoundSide::Upper => "upper",
                },
                template.omega0, template.alpha, template.c_lower, template.c_upper
            ),
        }
    }
}

pub fn parse_metric_kind(selection: &str) -> Result<MetricKind> {
    let bad = |msg: String| Error::InvalidParameter(msg);
    match selection {
        "bk" => return Ok(MetricKind::BeltramiKlein),
        "funk" => return Ok(MetricKind::Funk),
        "kh" => return Ok(MetricKind::KobayashiHilbert),
        "hs-min" => return Ok(MetricKind::HalfSpaceMinimal),
        _ => {}
    }
    if let Some(rest) = selection.strip_prefix("qk:") {
        let k: usize = rest
            .parse()
            .map_err(|_| bad(format!("bad qk order in {selection:?}")))?;
        return Ok(MetricKind::QuasiHyperbolic { k });
    }
    if let Some(rest) = selection.strip_prefix("tmpl:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 5 {
            return Err(bad(format!(
                "template selection needs tmpl:<side>:<omega0>:<alpha>:<c1>:<C1>, got {selection:?}"
            )));
        }
        let side = match parts[0] {
            "lower" => BoundSide::Lower,
            "upper" => BoundSide::Upper,
            other => return Err(bad(format!("unknown template side {other:?}"))),
        };
        let nums: Vec<f64> = parts[1..]
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad(format!("bad template numbers in {selection:?}")))?;
        let template = BoundTemplate::new(nums[0], nums[1], nums[2], nums[3])?;
        return Ok(MetricKind::BoundTemplate { template, side });
    }
    Err(bad(format!("unknown metric selection {selection:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use approx::assert_relative_eq;

    #[test]
    fn beltrami_klein_examples() {
        let disk = Domain::unit_ball(2);
        let x = point(&[0.0, 0.0]);
        assert_relative_eq!(
            beltrami_klein(&disk, &x, &point(&[3.0, 4.0])).unwrap(),
            5.0,
            max_relative = 1e-12
        );
        let x = point(&[0.5, 0.0]);
        assert_relative_eq!(
            beltrami_klein(&disk, &x, &point(&[1.0, 0.0])).unwrap(),
            1.0 / 0.75,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            beltrami_klein(&disk, &x, &point(&[0.0, 1.0])).unwrap(),
            1.0 / 0.75f64.sqrt(),
            max_relative = 1e-12
        );
        assert!(beltrami_klein(&disk, &point(&[1.0, 0.0]), &point(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn funk_examples() {
        let disk = Domain::unit_ball(2);
        let v = point(&[0.25, 0.0]);
        assert_relative_eq!(
            funk(&disk, &point(&[0.0, 0.0]), &v).unwrap(),
            0.25,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            funk(&disk, &point(&[0.5, 0.0]), &point(&[1.0, 0.0])).unwrap(),
            2.0,
            max_relative = 1e-12
        );
        let hs = Domain::half_space_x1(2);
        assert_eq!(
            funk(&hs, &point(&[1.0, 0.0]), &point(&[1.0, 0.0])).unwrap(),
            0.0
        );
    }

    #[test]
    fn kobayashi_hilbert_examples() {
        let disk = Domain::unit_ball(2);
        let x = point(&[0.5, 0.0]);
        assert_relative_eq!(
            kobayashi_hilbert(&disk, &x, &point(&[1.0, 0.0])).unwrap(),
            4.0 / 3.0,
            max_relative = 1e-12
        );
        let hs = Domain::half_space_x1(2);
        assert_relative_eq!(
            kobayashi_hilbert(&hs, &point(&[1.0, 0.0]), &point(&[1.0, 0.0])).unwrap(),
            0.5,
            max_relative = 1e-12
        );
        assert_eq!(
            kobayashi_hilbert(&hs, &point(&[1.0, 0.0]), &point(&[0.0, 0.0])).unwrap(),
            0.0
        );
    }

    #[test]
    fn hilbert_cross_ratio_examples() {
        let disk = Domain::unit_ball(2);
        let d = hilbert_distance_closed_form(&disk, &point(&[0.0, 0.0]), &point(&[0.5, 0.0]))
            .unwrap();
        assert_relative_eq!(d, 0.5 * 3.0f64.ln(), max_relative = 1e-12);
        assert_eq!(
            hilbert_distance_closed_form(&disk, &point(&[0.2, 0.1]), &point(&[0.2, 0.1])).unwrap(),
            0.0
        );
        let hs = Domain::half_space_x1(2);
        let d = hilbert_distance_closed_form(&hs, &point(&[1.0, 0.0]), &point(&[4.0, 0.0]))
            .unwrap();
        assert_relative_eq!(d, 0.5 * 4.0f64.ln(), max_relative = 1e-12);
        // chord parallel to the faces of a slab never exits
        let slab = Domain::slab_x1(2, 1.0);
        let d = hilbert_distance_closed_form(&slab, &point(&[0.0, 0.0]), &point(&[0.0, 5.0]))
            .unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn half_space_closed_forms() {
        assert_relative_eq!(
            half_space_qk_closed_form(&point(&[1.0, 0.0, 0.0]), &point(&[1.0, 0.0, 0.0]), 2)
                .unwrap(),
            0.5
        );
        assert_relative_eq!(
            half_space_qk_closed_form(&point(&[2.0, 1.0, 0.0]), &point(&[0.0, 1.0, 0.0]), 1)
                .unwrap(),
            0.0
        );
        assert_relative_eq!(
            half_space_qk_closed_form(&point(&[0.25, 0.0, 0.0]), &point(&[3.0, 4.0, 0.0]), 2)
                .unwrap(),
            6.0
        );
        assert!(half_space_qk_closed_form(&point(&[0.0, 0.0]), &point(&[1.0, 0.0]), 1).is_err());
        assert!(half_space_qk_closed_form(&point(&[1.0, 0.0]), &point(&[1.0, 0.0]), 2).is_err());
        assert_relative_eq!(
            half_space_minimal(&point(&[0.5, 0.0, 0.0]), &point(&[2.0, 5.0, 0.0])).unwrap(),
            2.0
        );
        assert_relative_eq!(
            half_space_minimal(&point(&[1.0, 0.0]), &point(&[0.0, 9.0])).unwrap(),
            0.0
        );
    }

    #[test]
    fn bound_template_examples() {
        let hs = Domain::half_space_x1(2);
        // omega = 0, c1 = C1 = 1, v along the normal, delta = 0.25
        let tmpl = BoundTemplate::new(0.0, 1.0, 1.0, 1.0).unwrap();
        let frame = hs.boundary_frame(&point(&[0.25, 0.0])).unwrap();
        let v = frame.normal.clone();
        assert_relative_eq!(
            bound_template_eval(&tmpl, BoundSide::Lower, &frame, &v).unwrap(),
            2.0
        );
        assert_relative_eq!(
            bound_template_eval(&tmpl, BoundSide::Upper, &frame, &v).unwrap(),
            2.0
        );
        assert_eq!(
            bound_template_eval(&tmpl, BoundSide::Upper, &frame, &point(&[0.0, 0.0])).unwrap(),
            0.0
        );
        // omega(t) = t at delta = 0.1: lower 4.5, upper 5.5
        let tmpl = BoundTemplate::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let frame = hs.boundary_frame(&point(&[0.1, 0.0])).unwrap();
        let v = frame.normal.clone();
        assert_relative_eq!(
            bound_template_eval(&tmpl, BoundSide::Lower, &frame, &v).unwrap(),
            4.5,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            bound_template_eval(&tmpl, BoundSide::Upper, &frame, &v).unwrap(),
            5.5,
            max_relative = 1e-12
        );
        // degenerate lower side when omega reaches 1
        let frame = hs.boundary_frame(&point(&[2.0, 0.0])).unwrap();
        assert!(bound_template_eval(&tmpl, BoundSide::Lower, &frame, &v).is_err());
    }

    #[test]
    fn tangent_ball_examples() {
        // on the unit ball itself with eps = 1 the tangent ball is the domain
        let ball = Domain::unit_ball(2);
        let x = point(&[0.63, -0.21]);
        let frame = ball.boundary_frame(&x).unwrap();
        let v = point(&[0.3, 1.1]);
        assert_relative_eq!(
            tangent_ball_upper_bound(&frame, &v, 1.0).unwrap(),
            beltrami_klein(&ball, &x, &v).unwrap(),
            max_relative = 1e-10
        );
        // the displayed bound dominates the tangent-ball value
        let hs = Domain::half_space_x1(2);
        let frame = hs.boundary_frame(&point(&[0.1, 0.0])).unwrap();
        let n = frame.normal.clone();
        let val = tangent_ball_upper_bound(&frame, &n, 1.0).unwrap();
        assert!(val <= ball_upper_bound_expr(1.0, 0.1, 1.0, 0.0) + 1e-12);
        let t = point(&[0.0, 1.0]);
        let val = tangent_ball_upper_bound(&frame, &t, 1.0).unwrap();
        assert!(val <= ball_upper_bound_expr(1.0, 0.1, 0.0, 1.0) + 1e-12);
        assert!(tangent_ball_upper_bound(&frame, &n, 0.05).is_err());
    }

    #[test]
    fn selection_strings_round_trip() {
        for s in ["bk", "funk", "kh", "qk:2", "tmpl:lower:0.5:1:1:2"] {
            let domain = Domain::unit_ball(3);
            let ev = MetricEvaluator::parse(s, domain).unwrap();
            assert_eq!(ev.selection_string(), s.replace("0.5:1:1:2", "0.5:1:1:2"));
        }
        let hs = Domain::half_space_x1(3);
        assert!(MetricEvaluator::parse("hs-min", hs).is_ok());
        assert!(MetricEvaluator::parse("hs-min", Domain::unit_ball(2)).is_err());
        assert!(MetricEvaluator::parse("xx", Domain::unit_ball(2)).is_err());
        assert!(MetricEvaluator::parse("qk:9", Domain::unit_ball(3)).is_err());
    }
}
