//! Cieliebak–Goldstein identity checks, the monotone defect and the
//! maximal-opening triangle monitor.

use crate::cp2_core::curve::wrap_angle;
use crate::cp2_core::maslov::mean_curvature_on;
use crate::cp2_core::{
    disc_region, maslov_disc, maslov_polygon, mean_curvature_integral, symplectic_area, Arc, Axis,
    ComponentSpline, PlanarPoint, ProfileCurve, RegionSpec, Segment, SymmetryClass,
};
use crate::error::{Error, Result};
use crate::{CHEKANOV_TARGET, CLIFFORD_TARGET, KAPPA};
use serde::Serialize;
use std::f64::consts::PI;

/// Slack added to the triangle-rate bound before a violation is flagged.
pub const TRIANGLE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotoneDefect {
    pub class: SymmetryClass,
    pub disc_area: f64,
    pub target: f64,
    pub defect: f64,
}

/// Triangle with its vertex at the origin, two cone rays and one curve arc.
#[derive(Debug, Clone, PartialEq)]
pub struct TrianglePatch {
    pub psi: f64,
    pub p_plus: PlanarPoint,
    pub p_minus: PlanarPoint,
    pub component: usize,
    /// Curve parameters of p⁻ and p⁺ in the order the component visits
    /// them; `reversed` says the region boundary runs the arc backwards.
    pub from: f64,
    pub to: f64,
    pub reversed: bool,
    pub area: f64,
    pub xi: f64,
}

impl TrianglePatch {
    fn region(&self, curve: &ProfileCurve) -> RegionSpec {
        RegionSpec::new(Some(curve))
            .push(Segment::ConeRay { angle: -0.5 * self.psi, r_from: 0.0, r_to: self.p_minus.r() })
            .push(Segment::CurveArc { component: self.component, from: self.from, to: self.to, reversed: self.reversed })
            .push(Segment::ConeRay { angle: 0.5 * self.psi, r_from: self.p_plus.r(), r_to: 0.0 })
    }

    /// Patch on an origin-enclosing component cut out by the rays at ±ψ/2,
    /// using the first crossing of each ray.
    pub fn on_rays(curve: &ProfileCurve, component: usize, psi: f64) -> Result<Self> {
        let sp = ComponentSpline::new(&curve.components[component]);
        let n = sp.len() as f64;
        let up = ray_crossing(&sp, 0.5 * psi)?;
        let mut down = ray_crossing(&sp, -0.5 * psi)?;
        if down > up {
            down -= n;
        }
        let (p_minus, p_plus) = (PlanarPoint::polar(sp.eval(down).r(), -0.5 * psi), PlanarPoint::polar(sp.eval(up).r(), 0.5 * psi));
        // averaging the two corners keeps the corner turning consistent
        // with the tangent turning of the interpolant along the arc
        let xi = 0.5 * (corner_turn(p_minus, sp.deriv(down)) + corner_turn(sp.deriv(up), -p_plus));
        let mut patch = TrianglePatch {
            psi,
            p_plus,
            p_minus,
            component,
            from: down.rem_euclid(n),
            to: down.rem_euclid(n) + (up - down),
            reversed: false,
            area: 0.0,
            xi,
        };
        patch.area = symplectic_area(&patch.region(curve))?;
        Ok(patch)
    }
}

/// Parameter where the component crosses the ray at `angle` heading
/// counterclockwise.
fn ray_crossing(sp: &ComponentSpline, angle: f64) -> Result<f64> {
    let d = PlanarPoint::polar(1.0, angle);
    let nrm = d.perp();
    let v = sp.vertices();
    let n = v.len();
    for i in 0..n {
        let (a, b) = (nrm.dot(v[i]), nrm.dot(v[(i + 1) % n]));
        if a <= 0.0 && b > 0.0 && d.dot(v[i]) > 0.0 {
            if a == 0.0 {
                return Ok(i as f64);
            }
            return Ok(sp.refine_crossing(i, |p| nrm.dot(p)));
        }
    }
    Err(Error::InvalidArc(format!("no crossing with the ray at {angle}")))
}

/// Exterior angle from incoming direction `a` to outgoing direction `b`,
/// in (0, π].
fn corner_turn(a: PlanarPoint, b: PlanarPoint) -> f64 {
    let a = a.normalized();
    let b = b.normalized();
    let mut xi = a.cross(b).atan2(a.dot(b));
    if xi <= 0.0 {
        xi += 2.0 * PI;
    }
    xi.min(PI)
}

/// κ·area − π·μ + ∮H for the disc bounded by a closed component.
pub fn cg_residual(curve: &ProfileCurve, component: usize) -> Result<f64> {
    let area = symplectic_area(&disc_region(curve, component))?;
    let mu = maslov_disc(curve, component)?;
    let h = mean_curvature_integral(curve, &Arc::full(curve, component))?;
    Ok(KAPPA * area - PI * mu as f64 + h)
}

/// κ·area − π·μ̃ + ∫H over the curve arc of a triangle patch; the cone
/// rays are minimal and contribute nothing.
pub fn cg_polygon_residual(patch: &TrianglePatch, curve: &ProfileCurve) -> Result<f64> {
    let sp = ComponentSpline::new(&curve.components[patch.component]);
    let h = mean_curvature_on(&sp, patch.from, patch.to);
    let h = if patch.reversed { -h } else { h };
    Ok(KAPPA * patch.area - PI * maslov_polygon(patch.xi, patch.psi)? + h)
}

/// Component whose disc carries the monotonicity condition: the only one
/// for Clifford, for Chekanov the one on the positive side of its axis.
pub fn disc_component(curve: &ProfileCurve) -> usize {
    match curve.class {
        SymmetryClass::Clifford => 0,
        SymmetryClass::Chekanov => {
            let ax = curve.chekanov_axis();
            let p = curve.components[0][0];
            let positive = match ax {
                Axis::Real => p.x > 0.0,
                Axis::Imaginary => p.y > 0.0,
            };
            if positive {
                0
            } else {
                1
            }
        }
    }
}

pub fn monotone_target(class: SymmetryClass) -> f64 {
    match class {
        SymmetryClass::Clifford => CLIFFORD_TARGET,
        SymmetryClass::Chekanov => CHEKANOV_TARGET,
    }
}

/// Uses the class recorded on the curve; callers that need topology
/// verified run [`ProfileCurve::classify`] first.
pub fn monotone_defect(curve: &ProfileCurve) -> Result<MonotoneDefect> {
    let disc_area = symplectic_area(&disc_region(curve, disc_component(curve)))?;
    let target = monotone_target(curve.class);
    Ok(MonotoneDefect { class: curve.class, disc_area, target, defect: (disc_area - target).abs() })
}

/// Area and d(area)/dλ at λ = 1 under w ↦ λw, by 3-point Gauss per spline
/// edge. Cheap enough to run every few flow steps.
pub fn fast_disc_area(points: &[PlanarPoint]) -> (f64, f64) {
    const X: [f64; 3] = [0.112_701_665_379_258_3, 0.5, 0.887_298_334_620_741_7];
    const W: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];
    let sp = ComponentSpline::new(points);
    let (mut a, mut da) = (0.0, 0.0);
    for i in 0..sp.len() {
        for (x, w) in X.iter().zip(W) {
            let u = i as f64 + x;
            let p = sp.eval(u);
            let c = p.cross(sp.deriv(u));
            let q = 1.0 + 2.0 * p.r2();
            a += w * c / q;
            da += w * 2.0 * c / (q * q);
        }
    }
    (a, da)
}

/// 2·max|φ| over the given points and the point attaining it.
pub fn max_opening_of(points: &[PlanarPoint]) -> (f64, PlanarPoint) {
    let mut best = (0.0, points.first().copied().unwrap_or(PlanarPoint::ORIGIN));
    for p in points {
        let a = p.phi().abs();
        if 2.0 * a > best.0 {
            best = (2.0 * a, *p);
        }
    }
    best
}

fn right_component(curve: &ProfileCurve) -> Result<usize> {
    if curve.class != SymmetryClass::Chekanov || curve.chekanov_axis() != Axis::Real {
        return Err(Error::UnsupportedTopology("maximal opening needs a Chekanov pair on the real axis".into()));
    }
    let k = disc_component(curve);
    if curve.components[k].iter().any(|p| p.x <= 0.0) {
        return Err(Error::UnsupportedTopology("component meets the imaginary axis".into()));
    }
    Ok(k)
}

/// Maximal opening angle ψ of the right-hand Chekanov component, refined on
/// the interpolant, with the upper tangency point p⁺.
pub fn max_opening_angle(curve: &ProfileCurve) -> Result<(f64, PlanarPoint)> {
    let k = right_component(curve)?;
    let sp = ComponentSpline::new(&curve.components[k]);
    let u = refine_extremum(&sp, |p| p.phi())?;
    let p = sp.eval(u);
    Ok((2.0 * p.phi().abs(), p))
}

/// Golden-section refinement of the vertex maximizing `f`.
fn refine_extremum<F: Fn(PlanarPoint) -> f64>(sp: &ComponentSpline, f: F) -> Result<f64> {
    let v = sp.vertices();
    let (i, _) = v
        .iter()
        .enumerate()
        .map(|(i, p)| (i, f(*p)))
        .fold((0, f64::NEG_INFINITY), |b, x| if x.1 > b.1 { x } else { b });
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (i as f64 - 1.0, i as f64 + 1.0);
    let val = |u: f64| f(sp.eval(u));
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (val(c), val(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = val(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = val(d);
        }
    }
    let u = 0.5 * (a + b);
    Ok(if val(u) >= f(v[i]) { u.rem_euclid(v.len() as f64) } else { i as f64 })
}

/// The triangle P under the maximal cone of the right-hand Chekanov
/// component: the rays at ±ψ/2 and the inner arc between the tangency
/// points.
pub fn maximal_triangle(curve: &ProfileCurve) -> Result<TrianglePatch> {
    let k = right_component(curve)?;
    let sp = ComponentSpline::new(&curve.components[k]);
    let n = sp.len() as f64;
    let up = refine_extremum(&sp, |p| p.phi())?;
    let mut down = refine_extremum(&sp, |p| -p.phi())?;
    if down < up {
        down += n;
    }
    let (p_plus, p_minus) = (sp.eval(up), sp.eval(down));
    let psi = p_plus.phi() - p_minus.phi();
    let mut patch = TrianglePatch {
        psi,
        p_plus,
        p_minus,
        component: k,
        from: up,
        to: down,
        reversed: true,
        area: 0.0,
        // both corners are tangencies
        xi: PI,
    };
    let region = RegionSpec::new(Some(curve))
        .push(Segment::ConeRay { angle: p_minus.phi(), r_from: 0.0, r_to: p_minus.r() })
        .push(Segment::CurveArc { component: k, from: up, to: down, reversed: true })
        .push(Segment::ConeRay { angle: p_plus.phi(), r_from: p_plus.r(), r_to: 0.0 });
    patch.area = symplectic_area(&region)?;
    Ok(patch)
}

/// Local neck triangle of an origin-enclosing curve: walking forward from
/// vertex 0 (on the positive real axis) to the first local maximum of φ.
/// Used by the two-singularity construction.
pub fn neck_triangle(curve: &ProfileCurve) -> Result<TrianglePatch> {
    if curve.class != SymmetryClass::Clifford {
        return Err(Error::UnsupportedTopology("neck triangle needs a Clifford curve".into()));
    }
    let c = &curve.components[0];
    let n = c.len();
    let mut i = 0;
    while i + 1 < n / 4 && wrap_angle(c[i + 1].phi() - c[i].phi()) > 0.0 {
        i += 1;
    }
    if i == 0 || i + 1 >= n / 4 {
        return Err(Error::InvalidArc("no local maximum of the polar angle in the first quadrant".into()));
    }
    let sp = ComponentSpline::new(c);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (i as f64 - 1.0, i as f64 + 1.0);
    for _ in 0..80 {
        let x = b - g * (b - a);
        let y = a + g * (b - a);
        if sp.eval(x).phi() > sp.eval(y).phi() {
            b = y;
        } else {
            a = x;
        }
    }
    let up = 0.5 * (a + b);
    let p_plus = sp.eval(up);
    let down = n as f64 - up;
    let p_minus = p_plus.conj();
    let mut patch = TrianglePatch {
        psi: 2.0 * p_plus.phi(),
        p_plus,
        p_minus,
        component: 0,
        from: down,
        to: n as f64 + up,
        reversed: false,
        area: 0.0,
        xi: PI,
    };
    patch.area = symplectic_area(&patch.region(curve))?;
    Ok(patch)
}

/// Centered rate of `y` at interior index `i` on a possibly non-uniform
/// time grid; second order.
pub(crate) fn centered_rate(t: &[f64], y: &[f64], i: usize) -> f64 {
    let h1 = t[i] - t[i - 1];
    let h2 = t[i + 1] - t[i];
    -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] + h1 / (h2 * (h1 + h2)) * y[i + 1]
}

/// Max |dA/dt − (κA − πμ)| over interior samples of an area series.
pub fn area_rate_check(t: &[f64], area: &[f64], mu: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 1..t.len().saturating_sub(1) {
        let rate = centered_rate(t, area, i);
        worst = worst.max((rate - (KAPPA * area[i] - PI * mu)).abs());
    }
    worst
}

/// One triangle-monitor row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleSample {
    pub t: f64,
    pub area: f64,
    pub psi: f64,
    pub violation: bool,
}

/// Flags samples where d/dt area(P) exceeds κ·area + (π − 2ψ) + tolerance.
pub fn triangle_monitor(t: &[f64], area: &[f64], psi: &[f64]) -> Vec<TriangleSample> {
    (0..t.len())
        .map(|i| {
            let violation = if i > 0 && i + 1 < t.len() {
                centered_rate(t, area, i) > KAPPA * area[i] + (PI - 2.0 * psi[i]) + TRIANGLE_TOL
            } else {
                false
            };
            TriangleSample { t: t[i], area: area[i], psi: psi[i], violation }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp2_core::disc_area;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn circle_residuals_vanish() {
        for r in [0.3, 0.7, 1.0, 2.5] {
            let c = ProfileCurve::circle(r, 1024);
            assert!(cg_residual(&c, 0).unwrap().abs() < 1e-8, "r={r}");
        }
    }

    #[test]
    fn star_residual_small_and_converging() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.05..0.05)).collect();
        let rho = |phi: f64| 1.0 + a[0] * (2.0 * phi).cos() + a[1] * (4.0 * phi).cos() + a[2] * (6.0 * phi).cos();
        let r = cg_residual(&ProfileCurve::star(rho, 4096), 0).unwrap();
        assert!(r.abs() < 1e-3);
    }

    #[test]
    fn unit_circle_triangles_cancel() {
        let c = ProfileCurve::circle(1.0, 1024);
        for psi in [PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0, 1e-3] {
            let p = TrianglePatch::on_rays(&c, 0, psi).unwrap();
            assert!((p.xi - PI / 2.0).abs() < 1e-6);
            assert!((p.area - psi / 3.0).abs() < 1e-9);
            assert!(cg_polygon_residual(&p, &c).unwrap().abs() < 1e-8, "psi={psi}");
        }
    }

    #[test]
    fn chekanov_tangent_triangle() {
        let c = ProfileCurve::chekanov_pair(PlanarPoint::new(1.0, 0.0), 0.25, 2048).unwrap();
        let (psi, p) = max_opening_angle(&c).unwrap();
        assert!((psi - 2.0 * 0.25f64.asin()).abs() < 1e-9);
        assert!(p.y > 0.0);
        let tri = maximal_triangle(&c).unwrap();
        assert!((tri.psi - psi).abs() < 1e-9);
        assert!(cg_polygon_residual(&tri, &c).unwrap().abs() < 1e-3);
        assert_eq!(max_opening_of(&[PlanarPoint::new(2.0, 0.0)]).0, 0.0);
        assert!(max_opening_angle(&ProfileCurve::circle(1.0, 64)).is_err());
    }

    #[test]
    fn monotone_defect_examples() {
        assert!(monotone_defect(&ProfileCurve::circle(1.0, 2048)).unwrap().defect < 1e-9);
        let d = monotone_defect(&ProfileCurve::circle(0.5f64.sqrt(), 2048)).unwrap();
        assert!((d.defect - PI / 6.0).abs() < 1e-9);
        let (a, da) = fast_disc_area(&ProfileCurve::circle(0.8, 512).components[0]);
        assert!((a - disc_area(0.8)).abs() < 1e-8);
        // d/dλ of 2πλ²r²/(1+2λ²r²) at λ = 1
        assert!((da - 4.0 * PI * 0.64 / (1.0f64 + 1.28).powi(2)).abs() < 1e-8);
    }

    #[test]
    fn area_rate_on_exact_solution() {
        let t: Vec<f64> = (0..50).map(|i| i as f64 * 1e-3).collect();
        let a: Vec<f64> = t.iter().map(|t| (PI / 2.0 - 2.0 * PI / 3.0) * (6.0 * t).exp() + 2.0 * PI / 3.0).collect();
        assert!(area_rate_check(&t, &a, 4.0) < 1e-4);
        let flat = vec![2.0 * PI / 3.0; 50];
        assert!(area_rate_check(&t, &flat, 4.0) < 1e-12);
    }

    #[test]
    fn triangle_bound_example() {
        // stationary area below ψ/2 − π/3 with ψ > 2π/3 gives a negative bound
        let psi = 2.2;
        let area = 0.5 * psi - PI / 3.0 - 0.05;
        assert!(KAPPA * area + (PI - 2.0 * psi) < 0.0);
        let rows = triangle_monitor(&[0.0, 1.0, 2.0], &[area; 3], &[psi; 3]);
        assert!(rows[1].violation);
    }
}
