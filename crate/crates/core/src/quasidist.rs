//! The boundary quasi-distance family `d_c`: from a pair of boundary frames
//! compute
//! `a(x, y) = (|pi(x) - pi(y)| + max(h(x), h(y))) / sqrt(h(x) h(y)) - 1`
//! and `d_c(x, y) = 2 log(1 + c a(x, y))`. For `c >= 1` this is a distance;
//! for smaller `c` the triangle inequality only holds up to a constant,
//! which [`quasi_triangle_constant`] estimates from samples.
//!
//! Everything consumes [`BoundaryFrame`]s rather than raw points, so the
//! single-valued-projection contract is enforced upstream.

use crate::error::{Error, Result};
use crate::geometry::BoundaryFrame;

/// Parameter of the family; the triangle inequality is only guaranteed for
/// `c >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiDistanceParams {
    pub c: f64,
}

impl QuasiDistanceParams {
    pub fn new(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter("c must be positive".into()));
        }
        Ok(Self { c })
    }
}

/// The normalized boundary gauge `a(x, y)`; symmetric, zero exactly when
/// the frames agree.
pub fn a_gauge(fx: &BoundaryFrame, fy: &BoundaryFrame) -> f64 {
    let feet = (&fx.foot - &fy.foot).norm();
    (feet + fx.h.max(fy.h)) / (fx.h * fy.h).sqrt() - 1.0
}

/// `d_c(x, y) = 2 log(1 + c a(x, y))`.
pub fn d_c(params: QuasiDistanceParams, fx: &BoundaryFrame, fy: &BoundaryFrame) -> f64 {
    2.0 * (params.c * a_gauge(fx, fy)).ln_1p()
}

/// Largest sampled ratio `d_c(x,y) / (d_c(x,z) + d_c(z,y))` over all triples
/// and all choices of the middle point, skipping degenerate zero
/// denominators. Values at most one mean the triangle inequality held on
/// the sample; for `c < 1` the result is an empirical lower bound for the
/// quasi-distance constant.
pub fn quasi_triangle_constant(
    params: QuasiDistanceParams,
    frames: &[BoundaryFrame],
) -> Result<f64> {
    if frames.len() < 3 {
        return Err(Error::InvalidParameter(
            "need at least 3 frames for triples".into(),
        ));
    }
    let n = frames.len();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = d_c(params, &frames[i], &frames[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            for m in 0..n {
                if m == i || m == j {
                    continue;
                }
                let denom = dist[i][m] + dist[m][j];
                if denom > 0.0 {
                    worst = worst.max(dist[i][j] / denom);
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{point, Domain};
    use approx::assert_relative_eq;

    fn frame_at(hs: &Domain, x1: f64, x2: f64) -> BoundaryFrame {
        hs.boundary_frame(&point(&[x1, x2])).unwrap()
    }

    #[test]
    fn gauge_examples() {
        let hs = Domain::half_space_x1(2);
        let f = frame_at(&hs, 0.3, 0.0);
        assert_eq!(a_gauge(&f, &f), 0.0);
        // same foot, depths 0.01 and 0.04: a = sqrt(2) - 1
        let f1 = frame_at(&hs, 0.01, 0.0);
        let f2 = frame_at(&hs, 0.04, 0.0);
        assert_relative_eq!(
            a_gauge(&f1, &f2),
            2.0f64.sqrt() - 1.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(a_gauge(&f2, &f1), a_gauge(&f1, &f2));
        // equal depths 0.01, feet 0.1 apart: (0.1 + 0.1)/0.1 - 1 = 1
        let g1 = frame_at(&hs, 0.01, 0.0);
        let g2 = frame_at(&hs, 0.01, 0.1);
        assert_relative_eq!(a_gauge(&g1, &g2), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn d_c_examples() {
        let hs = Domain::half_space_x1(2);
        let f1 = frame_at(&hs, 0.01, 0.0);
        let f2 = frame_at(&hs, 0.04, 0.0);
        let one = QuasiDistanceParams::new(1.0).unwrap();
        assert_eq!(d_c(one, &f1, &f1), 0.0);
        // shared foot at c = 1 reduces to 2 |log(h_x / h_y)| = log(delta_y/delta_x)
        assert_relative_eq!(d_c(one, &f1, &f2), 2.0f64.ln(), max_relative = 1e-12);
        let two = QuasiDistanceParams::new(2.0).unwrap();
        let d2 = d_c(two, &f1, &f2);
        assert_relative_eq!(
            d2,
            2.0 * (1.0 + 2.0 * (2.0f64.sqrt() - 1.0)).ln(),
            max_relative = 1e-12
        );
        // monotone bracket d1 <= d2 <= 2 d1
        let d1 = d_c(one, &f1, &f2);
        assert!(d1 <= d2 && d2 <= 2.0 * d1 + 1e-15);
    }

    #[test]
    fn triangle_behaviour() {
        let hs = Domain::half_space_x1(2);
        let frames: Vec<BoundaryFrame> = [
            (0.01, 0.0),
            (0.04, 0.02),
            (0.09, -0.05),
            (0.02, 0.2),
            (0.16, 0.01),
        ]
        .iter()
        .map(|&(a, b)| frame_at(&hs, a, b))
        .collect();
        let c1 = quasi_triangle_constant(QuasiDistanceParams::new(1.0).unwrap(), &frames).unwrap();
        assert!(c1 <= 1.0 + 1e-12);
        let c_half =
            quasi_triangle_constant(QuasiDistanceParams::new(0.5).unwrap(), &frames).unwrap();
        assert!(c_half.is_finite());
        // three collinear equal-depth points: ratio stays at most one
        let collinear: Vec<BoundaryFrame> = [0.0, 0.1, 0.2]
            .iter()
            .map(|&y| frame_at(&hs, 0.01, y))
            .collect();
        let c = quasi_triangle_constant(QuasiDistanceParams::new(1.0).unwrap(), &collinear)
            .unwrap();
        assert!(c <= 1.0 + 1e-12);
        assert!(
            quasi_triangle_constant(QuasiDistanceParams::new(1.0).unwrap(), &collinear[..2])
                .is_err()
        );
    }
}
