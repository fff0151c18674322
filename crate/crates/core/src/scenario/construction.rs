//! A Clifford curve built to pass through two neck pinches: a small neck on
//! the real axis opening wider than 2π/3, followed by a deep dip that
//! cradles a Euclidean disc and a final rise to the imaginary axis.
//!
//! The quarter in the first quadrant is a polyline in the (log r, φ) plane
//! with circular fillets at its corners: up the neck arc at log r = f0, out
//! along the ray at the neck angle, down to the dip, along it, and up to the
//! imaginary axis at log r = f1. Rays through the origin are stationary, so
//! the arm holds the opening of P while the neck arc shrinks. The log-polar
//! map is conformal, so the fillets bound the curvature. Reflections in both
//! axes fill in the rest.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, PI};

use serde::{Deserialize, Serialize};

use crate::cg_diagnostics::{monotone_defect, neck_triangle};
use crate::cp2_core::{area_primitive, ConeSpec, PlanarPoint, ProfileCurve, SymmetryClass};
use crate::error::{Error, Result};
use crate::numerics::bisect;

/// Tunable shape of the construction. Radii are Euclidean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwoSurgeryParams {
    /// Polar angle of the arm leaving the neck; half the opening ψ of P.
    pub neck_angle: f64,
    /// Radius where the arm turns down towards the dip.
    pub arm_end: f64,
    /// Polar angle of the flat bottom of the dip.
    pub dip_angle: f64,
    /// Radius where the descent from the neck meets the dip.
    pub dip_start: f64,
    /// Fillet radii in the log-polar plane at the neck top, the end of the
    /// arm, the start of the dip and the foot of the final rise.
    pub fillets: [f64; 4],
    /// Distance from the origin to the centre of the pocket disc.
    pub disc_distance: f64,
    /// Gap kept between the pocket disc and the cone line.
    pub disc_margin: f64,
    pub triangle_area: f64,
    pub pocket_area: f64,
    /// Width of the Gaussian smoothing in the log-polar plane.
    pub mollifier: f64,
    /// Vertices per quadrant of the dense construction polyline.
    pub quadrant_samples: usize,
}

impl Default for TwoSurgeryParams {
    fn default() -> Self {
        TwoSurgeryParams {
            neck_angle: 1.25,
            arm_end: 0.25,
            dip_angle: 0.03,
            dip_start: 0.32,
            fillets: [0.3, 0.2, 0.2, 0.25],
            disc_distance: FRAC_1_SQRT_2,
            disc_margin: 5e-3,
            triangle_area: PI / 216.0,
            pocket_area: PI / 18.0,
            mollifier: 0.04,
            quadrant_samples: 4096,
        }
    }
}

/// Euclidean disc in the profile plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: [f64; 2],
    pub radius: f64,
    pub area: f64,
    pub min_r: f64,
}

/// Outcome of the generator with its self-checks.
#[derive(Debug, Clone, Serialize)]
pub struct TwoSurgeryCurve {
    #[serde(skip)]
    pub curve: ProfileCurve,
    pub params: TwoSurgeryParams,
    pub neck_radius: f64,
    pub outer_radius: f64,
    pub triangle_area: f64,
    pub psi: f64,
    pub monotone_defect: f64,
    /// Crossings with C⁰_{2π/3} and C⁰_{π/2} over the whole curve.
    pub crossings_wide: usize,
    pub crossings_right: usize,
    pub pocket_r: Disc,
    /// Largest symplectic area of a disc with all radii above the threshold
    /// that fits between the rays π/3 and π/2, which bounds any disc in Q.
    pub pocket_q_bound: f64,
    pub radius_threshold: f64,
    pub checks: Vec<SelfCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfCheck {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub pass: bool,
}

impl TwoSurgeryCurve {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Threshold radius R(A) = √(A/(π − 2A)) above which a round Chekanov
/// circle of area A outlives the bound (1/6)log(π/(π − 3A)).
pub fn radius_threshold(area: f64) -> f64 {
    (area / (PI - 2.0 * area)).sqrt()
}

enum Piece {
    Line(PlanarPoint, PlanarPoint),
    Arc { c: PlanarPoint, rho: f64, a0: f64, sweep: f64 },
}

impl Piece {
    fn len(&self) -> f64 {
        match *self {
            Piece::Line(a, b) => a.dist(b),
            Piece::Arc { rho, sweep, .. } => rho * sweep.abs(),
        }
    }

    fn at(&self, l: f64) -> PlanarPoint {
        match *self {
            Piece::Line(a, b) => a + (b - a) * (l / a.dist(b)),
            Piece::Arc { c, rho, a0, sweep } => c + PlanarPoint::polar(rho, a0 + sweep.signum() * l / rho),
        }
    }
}

/// Polyline through `v` with fillet radius `rho[i]` at interior vertex i+1.
fn rounded_path(v: &[PlanarPoint], rho: &[f64]) -> Result<Vec<Piece>> {
    let mut pieces = vec![];
    let mut from = v[0];
    let mut spent = 0.0;
    for i in 1..v.len() - 1 {
        let d1 = (v[i] - v[i - 1]).normalized();
        let d2 = (v[i + 1] - v[i]).normalized();
        let turn = d1.cross(d2).atan2(d1.dot(d2));
        let t = rho[i - 1] * (0.5 * turn.abs()).tan();
        if spent + t > v[i].dist(v[i - 1]) || t > v[i].dist(v[i + 1]) {
            return Err(Error::Generator("fillet does not fit its legs".into()));
        }
        let (p1, p2) = (v[i] - d1 * t, v[i] + d2 * t);
        pieces.push(Piece::Line(from, p1));
        let n = if turn > 0.0 { d1.perp() } else { -d1.perp() };
        let c = p1 + n * rho[i - 1];
        let a0 = (p1 - c).phi();
        pieces.push(Piece::Arc { c, rho: rho[i - 1], a0, sweep: turn });
        from = p2;
        spent = t;
    }
    pieces.push(Piece::Line(from, v[v.len() - 1]));
    Ok(pieces)
}

/// The full dense curve for neck radius e^f0 and outer radius e^f1.
fn build(p: &TwoSurgeryParams, f0: f64, f1: f64) -> Result<ProfileCurve> {
    let v = [
        PlanarPoint::new(f0, 0.0),
        PlanarPoint::new(f0, p.neck_angle),
        PlanarPoint::new(p.arm_end.ln(), p.neck_angle),
        PlanarPoint::new(p.dip_start.ln(), p.dip_angle),
        PlanarPoint::new(f1, p.dip_angle),
        PlanarPoint::new(f1, FRAC_PI_2),
    ];
    if !(v[1].x < v[2].x && v[2].x < v[3].x && v[3].x < v[4].x) {
        return Err(Error::Generator("construction corners out of order".into()));
    }
    let path = rounded_path(&v, &p.fillets)?;
    let total: f64 = path.iter().map(Piece::len).sum();
    let m = p.quadrant_samples;
    let mut quarter = Vec::with_capacity(m);
    let (mut k, mut before) = (0, 0.0);
    for i in 0..m {
        let l = total * i as f64 / m as f64;
        while l > before + path[k].len() {
            before += path[k].len();
            k += 1;
        }
        quarter.push(path[k].at(l - before));
    }
    // whole curve in the log-polar plane: reflect in the imaginary axis,
    // then rotate by π
    let mut lp = quarter.clone();
    lp.push(PlanarPoint::new(f1, FRAC_PI_2));
    lp.extend(quarter[1..].iter().rev().map(|q| PlanarPoint::new(q.x, PI - q.y)));
    let half = lp.len();
    for i in 0..half {
        let q = lp[i];
        lp.push(PlanarPoint::new(q.x, q.y + PI));
    }
    let lp = mollify(&lp, p.mollifier * m as f64 / total);
    let pts = lp.iter().map(|q| PlanarPoint::polar(q.x.exp(), q.y)).collect();
    Ok(ProfileCurve { components: vec![pts], class: SymmetryClass::Clifford })
}

/// Gaussian smoothing of a closed log-polar path whose angle winds once;
/// removes the curvature jumps where fillets meet straight legs.
fn mollify(lp: &[PlanarPoint], sigma: f64) -> Vec<PlanarPoint> {
    let n = lp.len();
    if sigma < 0.5 {
        return lp.to_vec();
    }
    let w = (4.0 * sigma).ceil() as isize;
    let kernel: Vec<f64> = (-w..=w).map(|j| (-0.5 * (j as f64 / sigma).powi(2)).exp()).collect();
    let norm: f64 = kernel.iter().sum();
    let trend = |i: isize| 2.0 * PI * i as f64 / n as f64;
    (0..n as isize)
        .map(|i| {
            let (mut f, mut phi) = (0.0, 0.0);
            for (j, kw) in (-w..=w).zip(&kernel) {
                let q = lp[(i + j).rem_euclid(n as isize) as usize];
                // unwrap across the seam before removing the winding
                let turns = (i + j).div_euclid(n as isize) as f64;
                f += kw * q.x;
                phi += kw * (q.y + 2.0 * PI * turns - trend(i + j));
            }
            PlanarPoint::new(f / norm, phi / norm + trend(i))
        })
        .collect()
}

/// Symplectic area of a Euclidean disc, trapezoid rule on the boundary
/// (spectrally accurate for the periodic integrand).
fn disc_symplectic_area(c: PlanarPoint, rho: f64) -> f64 {
    let n = 2048;
    let mut a = 0.0;
    for i in 0..n {
        let t = 2.0 * PI * i as f64 / n as f64;
        let p = c + PlanarPoint::polar(rho, t);
        let dp = PlanarPoint::polar(rho, t).perp();
        a += area_primitive(p.r2()) * p.cross(dp) / p.r2();
    }
    // ∮ P(r²) dφ with dφ = (p × dp)/r²
    a * 2.0 * PI / n as f64
}

/// Disc of the requested area tangent (up to the margin) to the ray π/3
/// from below, centred at the given distance.
fn pocket_disc(p: &TwoSurgeryParams) -> Result<Disc> {
    let d = p.disc_distance;
    let place = |rho: f64| {
        let beta = FRAC_PI_3 - (rho / d).asin() - p.disc_margin;
        PlanarPoint::polar(d, beta)
    };
    let rho = bisect(|rho| disc_symplectic_area(place(rho), rho) - p.pocket_area, 1e-3, 0.9 * d, 1e-14)
        .map_err(|_| Error::Generator("no disc of the pocket area at this distance".into()))?;
    let c = place(rho);
    Ok(Disc { center: [c.x, c.y], radius: rho, area: disc_symplectic_area(c, rho), min_r: d - rho })
}

/// Largest disc area in the 30° band above the ray π/3 with every radius
/// above `r_min`: inscribed discs touch both rays, so one distance fixes it.
pub fn band_capacity(r_min: f64) -> f64 {
    let s = (PI / 12.0).sin();
    let mut best: f64 = 0.0;
    for i in 1..4000 {
        let d = i as f64 * 1e-3;
        if d * (1.0 - s) <= r_min {
            continue;
        }
        best = best.max(disc_symplectic_area(PlanarPoint::polar(d, 5.0 * PI / 12.0), d * s));
    }
    best
}

fn check(name: &str, value: f64, target: f64, tol: f64) -> SelfCheck {
    SelfCheck { name: name.into(), value, target, pass: (value - target).abs() <= tol }
}

/// Builds the curve, tunes the neck radius to the triangle area and the
/// outer radius to monotonicity, and runs the self-checks.
pub fn two_surgery_curve(p: &TwoSurgeryParams) -> Result<TwoSurgeryCurve> {
    if !(p.neck_angle > FRAC_PI_3 && p.neck_angle < FRAC_PI_2) {
        return Err(Error::Generator("neck angle must lie in (π/3, π/2)".into()));
    }
    if !(p.dip_angle > 0.0 && p.dip_angle < PI / 4.0 && p.dip_start > 0.0 && p.fillets.iter().all(|&r| r > 0.0)) {
        return Err(Error::Generator("dip must lie below π/4 with positive radii".into()));
    }
    let target = crate::CLIFFORD_TARGET;
    let tri = |f0: f64, f1: f64| -> f64 {
        build(p, f0, f1).and_then(|c| neck_triangle(&c)).map_or(f64::NAN, |t| t.area - p.triangle_area)
    };
    let mono = |f0: f64, f1: f64| -> f64 {
        build(p, f0, f1).and_then(|c| monotone_defect(&c)).map_or(f64::NAN, |m| m.disc_area - target)
    };
    // coarse alternating bisection, then Newton on both residuals
    let (mut f0, mut f1) = ((0.08f64).ln(), (1.1f64).ln());
    let lo1 = p.dip_start.ln() + p.fillets[2] + p.fillets[3];
    for _ in 0..3 {
        f1 = bisect(|x| mono(f0, x), lo1, 2f64.ln(), 1e-7)
            .map_err(|_| Error::Generator("outer radius cannot reach the monotone area".into()))?;
        // the neck fillet stops fitting well before the dip; back off to the
        // last admissible neck radius
        let mut hi = p.arm_end.ln() - p.fillets[0];
        while !tri(hi, f1).is_finite() && hi > -6.0 {
            hi -= 0.02;
        }
        f0 = bisect(|x| tri(x, f1), (1e-3f64).ln(), hi, 1e-7)
            .map_err(|_| Error::Generator("neck radius cannot reach the triangle area".into()))?;
    }
    let h = 1e-6;
    for _ in 0..12 {
        let (a, b) = (tri(f0, f1), mono(f0, f1));
        if a.abs() < 1e-13 && b.abs() < 1e-13 {
            break;
        }
        let (a0, b0) = ((tri(f0 + h, f1) - a) / h, (mono(f0 + h, f1) - b) / h);
        let (a1, b1) = ((tri(f0, f1 + h) - a) / h, (mono(f0, f1 + h) - b) / h);
        let det = a0 * b1 - a1 * b0;
        if !det.is_finite() || det == 0.0 {
            return Err(Error::Generator("singular tuning Jacobian".into()));
        }
        f0 -= (a * b1 - a1 * b) / det;
        f1 -= (a0 * b - a * b0) / det;
    }
    let curve = build(p, f0, f1)?;
    if !curve.is_embedded() {
        return Err(Error::Generator("construction is not embedded".into()));
    }
    let triangle = neck_triangle(&curve)?;
    let defect = monotone_defect(&curve)?;
    let disc = pocket_disc(p)?;
    let threshold = radius_threshold(p.pocket_area);

    // the disc must sit inside the curve: its boundary is enclosed and
    // stays clear of every curve vertex
    let c = PlanarPoint::new(disc.center[0], disc.center[1]);
    let poly = &curve.components[0];
    let clear = poly.iter().map(|q| q.dist(c) - disc.radius).fold(f64::INFINITY, f64::min);
    let inside = crate::cp2_core::curve::winding_number(poly, c)? == 1 && clear > 0.0;
    let q_bound = band_capacity(threshold);

    let checks = vec![
        check("triangle P area", triangle.area, p.triangle_area, 1e-6),
        check("opening of P exceeds 2π/3", (triangle.psi > 2.0 * PI / 3.0) as u8 as f64, 1.0, 0.0),
        check("monotone defect", defect.disc_area, target, 1e-6),
        check("pocket R disc area", disc.area, p.pocket_area, 1e-6),
        check("pocket R disc inside the curve", inside as u8 as f64, 1.0, 0.0),
        check("pocket R radii above threshold", (disc.min_r > threshold) as u8 as f64, 1.0, 0.0),
        check("pocket Q disc area", q_bound, p.pocket_area, 1e-6),
        check("threshold R(π/18)", radius_threshold(PI / 18.0), 0.25, 1e-12),
    ];
    let (wide, _) = crate::cp2_core::cone_intersections(&curve, &ConeSpec::symmetric(2.0 * PI / 3.0));
    let (right, _) = crate::cp2_core::cone_intersections(&curve, &ConeSpec::symmetric(FRAC_PI_2));
    Ok(TwoSurgeryCurve {
        curve,
        params: p.clone(),
        neck_radius: f0.exp(),
        outer_radius: f1.exp(),
        triangle_area: triangle.area,
        psi: triangle.psi,
        monotone_defect: defect.defect,
        crossings_wide: wide,
        crossings_right: right,
        pocket_r: disc,
        pocket_q_bound: q_bound,
        radius_threshold: threshold,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_of_the_construction_area() {
        assert!((radius_threshold(PI / 18.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn disc_area_matches_closed_form_about_origin_limit() {
        // a disc far from the origin compared with its size has area close
        // to the Euclidean area times the local density
        let c = PlanarPoint::new(1.0, 0.0);
        let a = disc_symplectic_area(c, 1e-3);
        let expect = PI * 1e-6 * 2.0 / 9.0;
        assert!((a / expect - 1.0).abs() < 1e-5, "{a} {expect}");
    }
}
