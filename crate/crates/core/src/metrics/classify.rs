use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::geometry::{orthonormal_completion, unit, Domain, Point, Vector};

/// Eigenvalues above this count as positive; the signs of the tangential
/// Hessian are what the convexity notions depend on.
const EIG_TOL: f64 = 1e-10;
const BOUNDARY_TOL: f64 = 1e-8;

/// Convexity data of a boundary point: the eigenvalues of the defining
/// function's Hessian restricted to the tangent space, sorted ascending,
/// and the flags derived from their signs.
#[derive(Debug, Clone)]
pub struct BoundaryClassification {
    /// Tangential Hessian eigenvalues, ascending (length `d - 1`).
    pub eigenvalues: Vec<f64>,
    /// All tangential eigenvalues positive.
    pub strongly_convex: bool,
    /// Sum of the two smallest eigenvalues positive; only meaningful for
    /// `d >= 3` (false in the plane, where a single eigenvalue exists).
    pub strongly_minimally_convex: bool,
}

impl BoundaryClassification {
    /// At least `d - k` positive tangential eigenvalues.
    pub fn is_k_strongly_convex(&self, k: usize) -> bool {
        let d = self.eigenvalues.len() + 1;
        if k == 0 || k > d {
            return false;
        }
        let positive = self.eigenvalues.iter().filter(|l| **l > EIG_TOL).count();
        positive + k >= d
    }
}

/// Classify a boundary point by the Hessian of a defining function
/// restricted to the tangent space. Supported: balls, ellipsoids,
/// half-spaces, slabs (affine pieces), single polytope faces, and implicit
/// domains (analytic or finite-difference derivatives).
pub fn classify_boundary_point(domain: &Domain, xi: &Point) -> Result<BoundaryClassification> {
    let d = domain.dim();
    let sd = domain.signed_distance(xi)?;
    if sd.abs() > BOUNDARY_TOL {
        return Err(Error::InvalidParameter(format!(
            "point is not on the boundary (signed distance {sd:.3e})"
        )));
    }
    let (grad, hess) = defining_derivatives(domain, xi)?;
    let n = unit(&grad).map_err(|_| Error::DegenerateGradient)?;
    let basis = orthonormal_completion(&n);
    let tangent = &basis[1..];
    let m = d - 1;
    let restricted = DMatrix::from_fn(m, m, |i, j| {
        let hv = &hess * &tangent[j];
        tangent[i].dot(&hv)
    });
    let sym = DMatrix::from_fn(m, m, |i, j| 0.5 * (restricted[(i, j)] + restricted[(j, i)]));
    let eig = SymmetricEigen::new(sym);
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.total_cmp(b));
    let strongly_convex = eigenvalues.iter().all(|l| *l > EIG_TOL);
    let strongly_minimally_convex = m >= 2 && eigenvalues[0] + eigenvalues[1] > EIG_TOL;
    Ok(BoundaryClassification {
        eigenvalues,
        strongly_convex,
        strongly_minimally_convex,
    })
}

/// Gradient and Hessian of a defining function at a boundary point.
fn defining_derivatives(domain: &Domain, xi: &Point) -> Result<(Vector, DMatrix<f64>)> {
    let d = domain.dim();
    match domain {
        // rho = |x - c|^2 - r^2
        Domain::Ball(b) => Ok((
            2.0 * (xi - &b.center),
            DMatrix::from_diagonal_element(d, d, 2.0),
        )),
        // rho = (x-c)^T S^{-1} (x-c) - 1
        Domain::Ellipsoid(e) => {
            let m = e.inverse_shape();
            Ok((2.0 * (m * (xi - &e.center)), 2.0 * m.clone()))
        }
        Domain::HalfSpace(h) => Ok((h.normal.clone(), DMatrix::zeros(d, d))),
        Domain::Slab(s) => {
            let side = (xi - &s.base).dot(&s.normal);
            let n = if side >= 0.0 {
                s.normal.clone()
            } else {
                -s.normal.clone()
            };
            Ok((n, DMatrix::zeros(d, d)))
        }
        Domain::Polytope(p) => {
            let active: Vec<&crate::geometry::Face> = p
                .faces
                .iter()
                .filter(|f| (f.normal.dot(xi) - f.offset).abs() <= BOUNDARY_TOL)
                .collect();
            match active.len() {
                1 => Ok((active[0].normal.clone(), DMatrix::zeros(d, d))),
                0 => Err(Error::InvalidParameter(
                    "point is not on any face".into(),
                )),
                _ => Err(Error::DegenerateGradient),
            }
        }
        Domain::Implicit(s) => {
            let g = s.grad(xi);
            if g.norm() < 1e-10 {
                return Err(Error::DegenerateGradient);
            }
            Ok((g, s.hess(xi)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{point, ImplicitBuiltin, ImplicitSmooth};
    use approx::assert_relative_eq;

    fn unit_sphere_implicit(fd: bool) -> Domain {
        let builtin = ImplicitBuiltin::EllipsoidLevelSet {
            center: vec![0.0; 3],
            semi_axes: vec![1.0; 3],
        };
        Domain::implicit(
            ImplicitSmooth::new(builtin, 3, 1.5, true)
                .unwrap()
                .with_fd_derivatives(fd),
        )
    }

    #[test]
    fn sphere_is_strongly_convex() {
        for fd in [false, true] {
            let sphere = unit_sphere_implicit(fd);
            let c = classify_boundary_point(&sphere, &point(&[0.0, 0.0, 1.0])).unwrap();
            assert_relative_eq!(c.eigenvalues[0], 2.0, max_relative = 1e-4);
            assert_relative_eq!(c.eigenvalues[1], 2.0, max_relative = 1e-4);
            assert!(c.strongly_convex);
            assert!(c.is_k_strongly_convex(1));
            assert!(c.is_k_strongly_convex(2));
            assert!(c.strongly_minimally_convex);
        }
    }

    #[test]
    fn cylinder_point_is_two_strongly_convex() {
        let builtin = ImplicitBuiltin::CylinderLevelSet {
            radius: 1.0,
            round_dims: 2,
        };
        let cyl = Domain::implicit(ImplicitSmooth::new(builtin, 3, 5.0, true).unwrap());
        let c = classify_boundary_point(&cyl, &point(&[1.0, 0.0, 0.0])).unwrap();
        assert_relative_eq!(c.eigenvalues[0], 0.0, epsilon = 1e-10);
        assert_relative_eq!(c.eigenvalues[1], 2.0, max_relative = 1e-10);
        assert!(!c.strongly_convex);
        assert!(!c.is_k_strongly_convex(1));
        assert!(c.is_k_strongly_convex(2));
        assert!(c.strongly_minimally_convex);
    }

    #[test]
    fn half_space_has_zero_hessian() {
        let hs = Domain::half_space_x1(3);
        let c = classify_boundary_point(&hs, &point(&[0.0, 2.0, -1.0])).unwrap();
        assert!(c.eigenvalues.iter().all(|l| l.abs() < 1e-12));
        assert!(!c.strongly_convex);
        assert!(!c.is_k_strongly_convex(1));
        assert!(!c.is_k_strongly_convex(2));
        assert!(c.is_k_strongly_convex(3));
        assert!(!c.strongly_minimally_convex);
    }

    #[test]
    fn off_boundary_point_rejected() {
        let hs = Domain::half_space_x1(3);
        assert!(classify_boundary_point(&hs, &point(&[0.5, 0.0, 0.0])).is_err());
    }
}
