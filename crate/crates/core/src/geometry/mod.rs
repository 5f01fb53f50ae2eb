//! Domain representations and the boundary geometry attached to them:
//! membership, ray casting, distance to the boundary, nearest-point
//! projection, outward normals and the normal/tangential splitting of
//! vectors at the projection foot.

mod domain;
mod frame;
mod implicit;

pub use domain::{Ball, Domain, DomainSpec, Ellipsoid, Face, HalfSpace, Polytope, Slab};
pub use frame::BoundaryFrame;
pub use implicit::{ImplicitBuiltin, ImplicitSmooth};

use crate::error::{Error, Result};

/// Euclidean coordinate vector. Points and tangent vectors share the
/// representation; domains fix the dimension and every operation checks it.
pub type Vector = nalgebra::DVector<f64>;
/// An interior or boundary point, as a coordinate vector.
pub type Point = Vector;

/// Supported dimension range. Everything here is meant for desk-scale
/// experiments; the cap keeps the subspace optimizer affordable.
pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

pub(crate) fn check_dim(expected: usize, v: &Vector) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        });
    }
    Ok(())
}

pub(crate) fn check_supported_dim(d: usize) -> Result<()> {
    if !(MIN_DIM..=MAX_DIM).contains(&d) {
        return Err(Error::InvalidParameter(format!(
            "dimension {d} outside supported range {MIN_DIM}..={MAX_DIM}"
        )));
    }
    Ok(())
}

pub(crate) fn check_finite(v: &Vector) -> Result<()> {
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidParameter(
            "coordinates must be finite".into(),
        ));
    }
    Ok(())
}

/// Build a point from a slice; convenience for tests and the CLI.
pub fn point(coords: &[f64]) -> Point {
    Vector::from_column_slice(coords)
}

pub fn unit(v: &Vector) -> Result<Vector> {
    let n = v.norm();
    if n <= 0.0 || !n.is_finite() {
        return Err(Error::ZeroVector);
    }
    Ok(v / n)
}

/// Orthonormal basis of `R^d` whose first vector is the given unit vector.
///
/// Uses the Householder reflection that maps `e_1` to `first`, so the
/// remaining columns are an orthonormal basis of the orthogonal complement.
pub fn orthonormal_completion(first: &Vector) -> Vec<Vector> {
    let d = first.len();
    let mut e1 = Vector::zeros(d);
    e1[0] = 1.0;
    let u = first - &e1;
    let uu = u.dot(&u);
    let mut basis = Vec::with_capacity(d);
    for j in 0..d {
        let mut col = Vector::zeros(d);
        col[j] = 1.0;
        if uu > 1e-28 {
            let scale = 2.0 * u[j] / uu;
            col -= scale * &u;
        }
        basis.push(col);
    }
    // first column equals `first` up to roundoff; snap it exactly
    basis[0] = first.clone();
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn completion_is_orthonormal() {
        let n = unit(&point(&[0.3, -0.4, 0.8, 0.1])).unwrap();
        let basis = orthonormal_completion(&n);
        assert_eq!(basis.len(), 4);
        assert!((basis[0].clone() - &n).norm() < 1e-15);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((basis[i].dot(&basis[j]) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn completion_handles_e1() {
        let n = point(&[1.0, 0.0]);
        let basis = orthonormal_completion(&n);
        assert!((basis[1].dot(&n)).abs() < 1e-15);
        assert!((basis[1].norm() - 1.0).abs() < 1e-15);
    }
}
