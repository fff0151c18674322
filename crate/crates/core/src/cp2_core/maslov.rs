use super::curve::wrap_angle;
use super::region::arc_integral;
use super::{alpha_density, ComponentSpline, PlanarPoint, ProfileCurve};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Real Maslov number split into its contributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaslovData {
    pub topological_part: i32,
    pub corner_part: f64,
    pub origin_part: f64,
    pub total: f64,
}

impl MaslovData {
    pub fn disc(mu: i32) -> Self {
        MaslovData { topological_part: mu, corner_part: 0.0, origin_part: 0.0, total: mu as f64 }
    }

    /// Triangle with its vertex at the origin: turning ξ at p± and opening ψ.
    pub fn triangle(xi: f64, psi: f64) -> Self {
        let corner = -(2.0 / PI) * xi;
        let origin = -(PI - 2.0 * psi) / PI;
        MaslovData { topological_part: 2, corner_part: corner, origin_part: origin, total: 2.0 + corner + origin }
    }
}

/// Contiguous parameter range on one component; `to - from` equal to the
/// vertex count means the full closed component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub component: usize,
    pub from: f64,
    pub to: f64,
}

impl Arc {
    pub fn full(curve: &ProfileCurve, component: usize) -> Self {
        Arc { component, from: 0.0, to: curve.components[component].len() as f64 }
    }
}

/// Maslov index of the disc bounded by `component`: 4 around the origin,
/// 2 otherwise.
pub fn maslov_disc(curve: &ProfileCurve, component: usize) -> Result<i32> {
    let w = curve.winding_number(component, PlanarPoint::ORIGIN)?;
    match w.abs() {
        1 => Ok(4),
        0 => Ok(2),
        _ => Err(Error::UnsupportedTopology(format!("winding {w} about the origin"))),
    }
}

/// μ̃ of the origin-vertex triangle: 2 − (2/π)ξ − (π − 2ψ)/π.
pub fn maslov_polygon(xi: f64, psi: f64) -> Result<f64> {
    if !(xi > 0.0 && xi <= PI) || !(psi > 0.0 && psi < PI) {
        return Err(Error::Domain(format!("xi = {xi}, psi = {psi}")));
    }
    Ok(MaslovData::triangle(xi, psi).total)
}

/// ∫ H along the arc: the turning of the tangent plus
/// ∫ (1−4r²)/(1+2r²) dφ.
pub fn mean_curvature_integral(curve: &ProfileCurve, arc: &Arc) -> Result<f64> {
    let c = curve
        .components
        .get(arc.component)
        .ok_or_else(|| Error::InvalidArc(format!("no component {}", arc.component)))?;
    if arc.to < arc.from || arc.to - arc.from > c.len() as f64 + 1e-12 {
        return Err(Error::InvalidArc(format!("range [{}, {}] on {} vertices", arc.from, arc.to, c.len())));
    }
    Ok(mean_curvature_on(&ComponentSpline::new(c), arc.from, arc.to))
}

pub(crate) fn mean_curvature_on(sp: &ComponentSpline, from: f64, to: f64) -> f64 {
    turning(sp, from, to) + arc_integral(sp, from, to, |p, dp| alpha_density(p.r2()) * p.cross(dp) / p.r2())
}

/// Total rotation of the tangent of the interpolant over `[from, to]`.
pub(crate) fn turning(sp: &ComponentSpline, from: f64, to: f64) -> f64 {
    let mut total = 0.0;
    let mut prev = sp.deriv(from).phi();
    let mut u = from;
    while u < to {
        let next = ((u * 2.0).floor() + 1.0) * 0.5;
        u = next.min(to);
        let a = sp.deriv(u).phi();
        total += wrap_angle(a - prev);
        prev = a;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maslov_examples() {
        assert_eq!(maslov_disc(&ProfileCurve::circle(1.0, 64), 0).unwrap(), 4);
        let far = ProfileCurve::chekanov_pair(PlanarPoint::new(2.0, 0.0), 0.5, 64).unwrap();
        assert_eq!(maslov_disc(&far, 0).unwrap(), 2);
        assert!((maslov_polygon(PI / 2.0, 1.1).unwrap() - 2.2 / PI).abs() < 1e-15);
        assert!(maslov_polygon(PI, PI / 2.0).unwrap().abs() < 1e-15);
        assert!((maslov_polygon(PI, PI / 4.0).unwrap() + 0.5).abs() < 1e-15);
        assert!(maslov_polygon(0.0, 1.0).is_err());
        assert!(maslov_polygon(1.0, PI).is_err());
    }

    #[test]
    fn circle_mean_curvature() {
        for r in [0.3, 1.0, 2.0] {
            let c = ProfileCurve::circle(r, 1024);
            let h = mean_curvature_integral(&c, &Arc::full(&c, 0)).unwrap();
            let want = -4.0 * PI * (r * r - 1.0) / (1.0 + 2.0 * r * r);
            assert!((h - want).abs() < 1e-9, "r={r}: {h} vs {want}");
        }
    }

    #[test]
    fn straight_radial_segment_has_no_mean_curvature() {
        // a thin symmetric sliver whose long sides lie on rays; ∫H on one side
        let pts: Vec<_> = (0..16).map(|i| PlanarPoint::polar(0.5 + 0.1 * i as f64, 0.3)).collect();
        let sp = ComponentSpline::new(&pts);
        let h = mean_curvature_on(&sp, 3.0, 12.0);
        assert!(h.abs() < 1e-14);
    }
}
