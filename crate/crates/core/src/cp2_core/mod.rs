//! Geometric primitives of the equivariant reduction: points, profile
//! curves, cones, regions, the Fubini–Study area form on the profile plane
//! and Maslov bookkeeping.

mod cone;
pub(crate) mod curve;
pub(crate) mod maslov;
mod point;
pub(crate) mod region;
mod spline;

pub use cone::{circle_crossings, cone_intersections, ConeCrossing, ConeSpec};
pub use curve::{Axis, ProfileCurve, SymmetryClass};
pub use maslov::{maslov_disc, maslov_polygon, mean_curvature_integral, Arc, MaslovData};
pub use point::PlanarPoint;
pub use region::{disc_region, symplectic_area, RegionSpec, Segment};
pub use spline::ComponentSpline;

/// Boundary primitive of the area form 2/(1+2r²)² dA, per unit dφ.
#[inline]
pub fn area_primitive(r2: f64) -> f64 {
    r2 / (1.0 + 2.0 * r2)
}

/// The α-part of the mean curvature one-form, per unit dφ.
#[inline]
pub fn alpha_density(r2: f64) -> f64 {
    (1.0 - 4.0 * r2) / (1.0 + 2.0 * r2)
}

/// Closed-form symplectic area of the round disc of radius `r` about 0.
pub fn disc_area(r: f64) -> f64 {
    2.0 * std::f64::consts::PI * r * r / (1.0 + 2.0 * r * r)
}
