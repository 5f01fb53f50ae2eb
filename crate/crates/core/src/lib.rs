//! Finsler metrics on convex domains of `R^d`, the boundary geometry they
//! live on, and numerical approximation of their intrinsic distances.

pub mod error;
pub mod geometry;
pub mod intrinsic;
pub mod metrics;
pub mod quasidist;

pub use error::{Error, Result};
pub use geometry::{BoundaryFrame, Domain, Point, Vector};
