use super::{Point, Vector};

/// Projection data attached to an interior point `x` near the boundary:
/// the unique nearest boundary point `foot`, the outward unit `normal`
/// there, the boundary distance `delta` and its square root `h`.
///
/// Reconstruction invariant: `foot - delta * normal == x`.
#[derive(Debug, Clone)]
pub struct BoundaryFrame {
    pub foot: Point,
    pub normal: Vector,
    pub delta: f64,
    pub h: f64,
}

impl BoundaryFrame {
    pub(crate) fn new(foot: Point, normal: Vector, delta: f64) -> Self {
        debug_assert!(delta > 0.0);
        debug_assert!((normal.norm() - 1.0).abs() < 1e-10);
        Self {
            foot,
            normal,
            delta,
            h: delta.sqrt(),
        }
    }

    /// The interior point this frame was built from.
    pub fn point(&self) -> Point {
        &self.foot - self.delta * &self.normal
    }

    /// Split `v` into its component along the outward normal and the
    /// orthogonal (tangential) remainder, so that `v = v_n + v_t`.
    pub fn decompose(&self, v: &Vector) -> (Vector, Vector) {
        let coeff = v.dot(&self.normal);
        let v_n = coeff * &self.normal;
        let v_t = v - &v_n;
        (v_n, v_t)
    }

    /// Norm of the normal component of `v`.
    pub fn normal_norm(&self, v: &Vector) -> f64 {
        v.dot(&self.normal).abs()
    }

    /// Norm of the tangential component of `v`.
    pub fn tangential_norm(&self, v: &Vector) -> f64 {
        let (_, v_t) = self.decompose(v);
        v_t.norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;

    #[test]
    fn decompose_splits_orthogonally() {
        let frame = BoundaryFrame::new(point(&[1.0, 0.0, 0.0]), point(&[1.0, 0.0, 0.0]), 0.5);
        let v = point(&[1.0, 2.0, 0.0]);
        let (vn, vt) = frame.decompose(&v);
        assert!((vn - point(&[1.0, 0.0, 0.0])).norm() < 1e-15);
        assert!((vt - point(&[0.0, 2.0, 0.0])).norm() < 1e-15);
    }

    #[test]
    fn decompose_pure_cases() {
        let frame = BoundaryFrame::new(point(&[1.0, 0.0]), point(&[1.0, 0.0]), 0.25);
        let (vn, vt) = frame.decompose(&frame.normal.clone());
        assert!((vn - &frame.normal).norm() < 1e-15);
        assert!(vt.norm() < 1e-15);
        let tangent = point(&[0.0, 3.0]);
        let (vn, vt) = frame.decompose(&tangent);
        assert!(vn.norm() < 1e-15);
        assert!((vt - tangent).norm() < 1e-15);
    }

    #[test]
    fn reconstructs_base_point() {
        let frame = BoundaryFrame::new(point(&[1.0, 3.0]), point(&[1.0, 0.0]), 2.0);
        assert!((frame.point() - point(&[-1.0, 3.0])).norm() < 1e-15);
        assert!((frame.h * frame.h - frame.delta).abs() < 1e-12);
    }
}
