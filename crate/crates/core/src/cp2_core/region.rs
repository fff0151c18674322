use super::{area_primitive, ComponentSpline, PlanarPoint, ProfileCurve};
use crate::error::{Error, Result};
use crate::numerics::adaptive_simpson;

/// Per-segment quadrature tolerance.
pub const SEGMENT_TOL: f64 = 1e-10;
/// Pieces spanning more polar angle than this are split before quadrature.
pub const MAX_ANGLE_SPAN: f64 = 0.1;
/// Endpoint mismatch allowed between consecutive boundary segments.
pub const CLOSURE_TOL: f64 = 1e-9;

/// One piece of a region boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    /// Curve arc on `component` from parameter `from` forward to `to`
    /// (`to >= from`, at most one full turn); traversed backwards when
    /// `reversed` is set.
    CurveArc { component: usize, from: f64, to: f64, reversed: bool },
    /// Radial segment on the ray at `angle` from radius `r_from` to `r_to`.
    ConeRay { angle: f64, r_from: f64, r_to: f64 },
    /// Arc of the round circle of `radius` about 0.
    CircleArc { radius: f64, phi_from: f64, phi_to: f64 },
}

/// Oriented closed boundary loop. Curve arcs refer to the splines of the
/// curve the region was built from.
#[derive(Debug, Clone)]
pub struct RegionSpec {
    pub segments: Vec<Segment>,
    pub counterclockwise: bool,
    splines: Vec<ComponentSpline>,
}

impl RegionSpec {
    pub fn new(curve: Option<&ProfileCurve>) -> Self {
        RegionSpec {
            segments: vec![],
            counterclockwise: true,
            splines: curve.map(|c| c.splines()).unwrap_or_default(),
        }
    }

    pub fn with_splines(splines: Vec<ComponentSpline>) -> Self {
        RegionSpec { segments: vec![], counterclockwise: true, splines }
    }

    pub fn push(mut self, s: Segment) -> Self {
        self.segments.push(s);
        self
    }

    /// Same loop traversed the other way.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.counterclockwise = !self.counterclockwise;
        out
    }

    pub fn splines(&self) -> &[ComponentSpline] {
        &self.splines
    }

    fn endpoints(&self, s: &Segment) -> Result<(PlanarPoint, PlanarPoint)> {
        Ok(match *s {
            Segment::CurveArc { component, from, to, reversed } => {
                let sp = self
                    .splines
                    .get(component)
                    .ok_or_else(|| Error::InvalidArc(format!("no component {component}")))?;
                let (a, b) = (sp.eval(from), sp.eval(to));
                if reversed {
                    (b, a)
                } else {
                    (a, b)
                }
            }
            Segment::ConeRay { angle, r_from, r_to } => (PlanarPoint::polar(r_from, angle), PlanarPoint::polar(r_to, angle)),
            Segment::CircleArc { radius, phi_from, phi_to } => {
                (PlanarPoint::polar(radius, phi_from), PlanarPoint::polar(radius, phi_to))
            }
        })
    }

    /// Checks closure and origin avoidance.
    pub fn check(&self) -> Result<()> {
        let n = self.segments.len();
        for k in 0..n {
            let (_, end) = self.endpoints(&self.segments[k])?;
            let (start, _) = self.endpoints(&self.segments[(k + 1) % n])?;
            let gap = end.dist(start);
            if gap > CLOSURE_TOL {
                return Err(Error::RegionMalformed { segment: k, gap });
            }
            match self.segments[k] {
                Segment::CircleArc { radius, .. } if radius <= 0.0 => return Err(Error::DegenerateRegion(k)),
                Segment::CurveArc { component, from, to, .. } => {
                    if to < from || to - from > self.splines[component].len() as f64 + 1e-12 {
                        return Err(Error::InvalidArc(format!("parameter range [{from}, {to}]")));
                    }
                    let sp = &self.splines[component];
                    let mut u = from;
                    while u <= to {
                        if sp.eval(u).r() < 1e-12 {
                            return Err(Error::DegenerateRegion(k));
                        }
                        u += 0.25;
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Integrates `f(p, dp/du)` along the spline from `u0` to `u1`, splitting at
/// vertices and wherever a piece spans more than `MAX_ANGLE_SPAN` of polar
/// angle.
pub(crate) fn arc_integral<F: Fn(PlanarPoint, PlanarPoint) -> f64>(sp: &ComponentSpline, u0: f64, u1: f64, f: F) -> f64 {
    if u1 <= u0 {
        return 0.0;
    }
    let g = |u: f64| {
        let p = sp.eval(u);
        f(p, sp.deriv(u))
    };
    let mut total = 0.0;
    let mut a = u0;
    while a < u1 {
        let b = (a.floor() + 1.0).min(u1);
        let span = super::curve::wrap_angle(sp.eval(b).phi() - sp.eval(a).phi()).abs();
        let k = ((span / MAX_ANGLE_SPAN).ceil() as usize).max(1);
        let h = (b - a) / k as f64;
        for j in 0..k {
            let lo = a + h * j as f64;
            let hi = if j + 1 == k { b } else { lo + h };
            total += adaptive_simpson(&g, lo, hi, SEGMENT_TOL);
        }
        a = b;
    }
    total
}

/// ∮ r²/(1+2r²) dφ over the region boundary: the symplectic area with
/// respect to 2/(1+2r²)² dA. Counterclockwise loops are positive.
pub fn symplectic_area(region: &RegionSpec) -> Result<f64> {
    region.check()?;
    let mut total = 0.0;
    for s in &region.segments {
        total += match *s {
            Segment::CurveArc { component, from, to, reversed } => {
                let v = arc_integral(&region.splines[component], from, to, |p, dp| p.cross(dp) / (1.0 + 2.0 * p.r2()));
                if reversed {
                    -v
                } else {
                    v
                }
            }
            Segment::ConeRay { .. } => 0.0,
            Segment::CircleArc { radius, phi_from, phi_to } => area_primitive(radius * radius) * (phi_to - phi_from),
        };
    }
    Ok(if region.counterclockwise { total } else { -total })
}

/// Region bounded by a full closed component.
pub fn disc_region(curve: &ProfileCurve, component: usize) -> RegionSpec {
    let n = curve.components[component].len() as f64;
    RegionSpec::new(Some(curve)).push(Segment::CurveArc { component, from: 0.0, to: n, reversed: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp2_core::disc_area;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn circle_region(r: f64) -> RegionSpec {
        RegionSpec::new(None).push(Segment::CircleArc { radius: r, phi_from: 0.0, phi_to: 2.0 * PI })
    }

    #[test]
    fn disc_values_at_clifford_and_half_radius() {
        assert!((symplectic_area(&circle_region(1.0)).unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((symplectic_area(&circle_region(FRAC_1_SQRT_2)).unwrap() - PI / 2.0).abs() < 1e-15);
        assert_eq!(symplectic_area(&RegionSpec::new(None)).unwrap(), 0.0);
    }

    #[test]
    fn unit_triangle_is_psi_over_three() {
        for psi in [0.3, 1.0, 2.5] {
            let reg = RegionSpec::new(None)
                .push(Segment::ConeRay { angle: -psi / 2.0, r_from: 0.0, r_to: 1.0 })
                .push(Segment::CircleArc { radius: 1.0, phi_from: -psi / 2.0, phi_to: psi / 2.0 })
                .push(Segment::ConeRay { angle: psi / 2.0, r_from: 1.0, r_to: 0.0 });
            assert!((symplectic_area(&reg).unwrap() - psi / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn polyline_circle_matches_disc_formula() {
        for r in [0.25, 1.0, 4.0] {
            let c = ProfileCurve::circle(r, 4096);
            let a = symplectic_area(&disc_region(&c, 0)).unwrap();
            assert!((a - disc_area(r)).abs() < 1e-8, "r={r}: {a} vs {}", disc_area(r));
        }
    }

    #[test]
    fn malformed_and_degenerate() {
        let reg = RegionSpec::new(None)
            .push(Segment::ConeRay { angle: 0.0, r_from: 0.0, r_to: 1.0 })
            .push(Segment::CircleArc { radius: 1.0, phi_from: 0.0, phi_to: 1.0 });
        assert!(matches!(symplectic_area(&reg), Err(Error::RegionMalformed { .. })));
    }

    #[test]
    fn reversal_negates_exactly() {
        let c = ProfileCurve::star(|phi| 1.0 + 0.2 * (2.0 * phi).cos(), 256);
        let reg = disc_region(&c, 0);
        let a = symplectic_area(&reg).unwrap();
        assert_eq!(symplectic_area(&reg.reversed()).unwrap(), -a);
    }
}
