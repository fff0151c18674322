//! Immersed minimal equivariant Lagrangians from the first integral
//! f′² = C e^{4f}/(1+2e^{2f})³ − 1, f = log r, primes in the polar angle.

use crate::cp2_core::{ComponentSpline, PlanarPoint, ProfileCurve, SymmetryClass};
use crate::error::{Error, Result};
use crate::numerics::{bisect, tanh_sinh, GaussLegendre};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss–Legendre order used for every period-type integral.
pub const GL_NODES: usize = 512;
/// Documented bound on the quadrature error of [`period`]; the regularized
/// integrand is analytic so the rule converges geometrically.
pub const PERIOD_ERROR_BOUND: f64 = 1e-9;

fn gl() -> &'static GaussLegendre {
    static GL: OnceLock<GaussLegendre> = OnceLock::new();
    GL.get_or_init(|| GaussLegendre::new(GL_NODES))
}

/// One member of the minimal family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimalProfile {
    pub c: f64,
    pub r1: f64,
    pub r2: f64,
    pub x3: f64,
    pub period: f64,
    pub inner_period: f64,
    pub cone_radius: f64,
}

impl MinimalProfile {
    pub fn new(c: f64) -> Result<Self> {
        let (r1, r2, x3) = radial_roots(c)?;
        Ok(MinimalProfile {
            c,
            r1,
            r2,
            x3,
            period: period(c)?,
            inner_period: inner_period(c)?,
            cone_radius: cone_radius(c)?,
        })
    }
}

/// A closed member: m periods sweep 2πk of polar angle.
#[derive(Debug, Clone)]
pub struct ClosureSolution {
    pub m: u32,
    pub k: u32,
    pub c: f64,
    /// Set when the request was not in lowest terms.
    pub reduced_from: Option<(u32, u32)>,
    pub profile: ProfileCurve,
    pub closure_gap: f64,
}

/// B(f, C) in terms of x = r² = e^{2f}.
pub fn first_integral(x: f64, c: f64) -> f64 {
    c * x * x / (1.0 + 2.0 * x).powi(3) - 1.0
}

fn cubic(x: f64, c: f64) -> f64 {
    ((-8.0 * x + (c - 12.0)) * x - 6.0) * x - 1.0
}

/// Bisection to the last representable bit.
fn bisect_exact<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..2000 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Roots of −8x³ + (C−12)x² − 6x − 1: returns (√x1, √x2, x3) with
/// 0 < x1 < 1 < x2 and x3 < 0.
pub fn radial_roots(c: f64) -> Result<(f64, f64, f64)> {
    if !(c > 27.0) || !c.is_finite() {
        return Err(Error::Domain(format!("C = {c} must exceed 27")));
    }
    let x1 = bisect_exact(|x| cubic(x, c), 0.0, 1.0);
    let x2 = bisect_exact(|x| cubic(x, c), 1.0, c / 8.0 + 1.0);
    // product of the three roots is −1/8
    let x3 = -1.0 / (8.0 * x1 * x2);
    Ok((x1.sqrt(), x2.sqrt(), x3))
}

struct Roots {
    x1: f64,
    x2: f64,
    x3: f64,
    f1: f64,
    f2: f64,
}

fn roots(c: f64) -> Result<Roots> {
    let (r1, r2, x3) = radial_roots(c)?;
    if r1 >= 1.0 || r2 <= 1.0 || r1 == r2 {
        return Err(Error::RootFailure(format!("degenerate roots at C = {c}")));
    }
    Ok(Roots { x1: r1 * r1, x2: r2 * r2, x3, f1: r1.ln(), f2: r2.ln() })
}

impl Roots {
    /// 1/√B at f, with both root factors evaluated from offsets so that
    /// nothing cancels near the turning points.
    fn inv_sqrt_b(&self, f: f64, df1: f64, df2: f64) -> f64 {
        let x = (2.0 * f).exp();
        let a = self.x1 * (2.0 * df1).exp_m1();
        let b = -self.x2 * (-2.0 * df2).exp_m1();
        let prod = 8.0 * a * b * (x - self.x3);
        ((1.0 + 2.0 * x).powi(3) / prod).sqrt()
    }

    /// ∫ df/√B from f1 to `f_end` by f = f1 + (f_end − f1) sin²u; the
    /// substitution cancels the inverse-square-root singularity at f1 (and
    /// at f2 when `f_end` is f2).
    fn angle_to(&self, f_end: f64) -> f64 {
        let span = f_end - self.f1;
        if span <= 0.0 {
            return 0.0;
        }
        gl().integrate(|u| self.integrand(u, span), 0.0, 0.5 * PI)
    }

    fn integrand(&self, u: f64, span: f64) -> f64 {
        let (s, co) = u.sin_cos();
        let df1 = span * s * s;
        let f = self.f1 + df1;
        // written so that it is exact at the outer turning point of the full arc
        let df2 = (self.f2 - self.f1 - span) + span * co * co;
        let jac = 2.0 * span * s * co;
        if jac == 0.0 {
            // limit at the turning point, or a regular endpoint
            let eps = 1e-7;
            return self.integrand(if u < 0.25 * PI { eps } else { 0.5 * PI - eps }, span);
        }
        jac * self.inv_sqrt_b(f, df1, df2)
    }
}

/// Full period ψ_C = 2 ∫_{r1}^{r2} dr / (r√B): the polar angle swept by one
/// oscillation r1 → r2 → r1.
pub fn period(c: f64) -> Result<f64> {
    let r = roots(c)?;
    Ok(2.0 * r.angle_to(r.f2))
}

/// Inner period ψ_C⁻ = 2 ∫_{r1}^{1} dr / (r√B).
pub fn inner_period(c: f64) -> Result<f64> {
    let r = roots(c)?;
    Ok(2.0 * r.angle_to(0.0))
}

/// Period from tanh-sinh applied directly to the r-integral, split at r = 1.
/// Only the root factors use endpoint offsets; no substitution is applied.
pub fn period_tanh_sinh(c: f64) -> Result<f64> {
    let r = roots(c)?;
    let (r1, r2) = (r.x1.sqrt(), r.x2.sqrt());
    let g = |rr: f64, d1: f64, d2: f64| {
        let x = rr * rr;
        let a = d1 * (rr + r1);
        let b = d2 * (rr + r2);
        let denom = 8.0 * a * b * (x - r.x3);
        ((1.0 + 2.0 * x).powi(3) / denom).sqrt() / rr
    };
    let inner = tanh_sinh(|rr, da, _| g(rr, da, r2 - rr), r1, 1.0, 1e-13);
    let outer = tanh_sinh(|rr, _, db| g(rr, rr - r1, db), 1.0, r2, 1e-13);
    Ok(2.0 * (inner + outer))
}

/// Radius at which the solution leaving its minimum has turned through
/// polar angle π/4.
pub fn cone_radius(c: f64) -> Result<f64> {
    let r = roots(c)?;
    let target = 0.25 * PI;
    let half = r.angle_to(r.f2);
    if half <= target {
        return Err(Error::RootFailure(format!("half period {half} below π/4 at C = {c}")));
    }
    let f = bisect(|f| r.angle_to(f) - target, r.f1, r.f2, 1e-13)?;
    Ok(f.exp())
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Log grid of C, 64 points per decade, on (27, c_max].
pub fn scan_grid(c_max: f64) -> Vec<f64> {
    let lo = 27f64.log10();
    let n = ((c_max.log10() - lo) * 64.0).floor() as usize;
    (1..=n).map(|j| 10f64.powf(lo + j as f64 / 64.0)).chain(std::iter::once(c_max)).collect()
}

/// Periods on the scan grid; shared by [`find_closed`] and the catalog.
pub fn period_scan(c_max: f64) -> Result<Vec<(f64, f64)>> {
    scan_grid(c_max).into_iter().map(|c| Ok((c, period(c)?))).collect()
}

/// Every C in the scan range with m ψ_C = 2πk, by bracketing the scan and
/// bisecting; ψ_C is not assumed monotone.
pub fn closure_constants(scan: &[(f64, f64)], m: u32, k: u32) -> Vec<f64> {
    let target = 2.0 * PI * k as f64 / m as f64;
    let mut out = vec![];
    for w in scan.windows(2) {
        let (c0, p0) = w[0];
        let (c1, p1) = w[1];
        if (p0 - target) * (p1 - target) > 0.0 {
            continue;
        }
        if let Ok(c) = bisect_closure(c0, c1, target) {
            out.push(c);
        }
    }
    out
}

fn bisect_closure(mut a: f64, mut b: f64, target: f64) -> Result<f64> {
    let fa = period(a)? - target;
    let mut best = (a, fa);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = period(m)? - target;
        if fm.abs() < best.1.abs() {
            best = (m, fm);
        }
        if fm.abs() < 1e-11 || m == a || m == b {
            break;
        }
        if fm.signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(best.0)
}

/// Smallest-C solution of m ψ_C = 2πk on the scan range, with profile.
pub fn find_closed(m: u32, k: u32, c_max: f64, vertices_per_period: usize) -> Result<Option<ClosureSolution>> {
    find_closed_in(&period_scan(c_max)?, m, k, vertices_per_period)
}

pub fn find_closed_in(
    scan: &[(f64, f64)],
    m: u32,
    k: u32,
    vertices_per_period: usize,
) -> Result<Option<ClosureSolution>> {
    if m == 0 || k == 0 {
        return Err(Error::Domain("m and k must be positive".into()));
    }
    let g = gcd(m, k);
    let (mm, kk) = (m / g, k / g);
    let Some(&c) = closure_constants(scan, mm, kk).first() else {
        return Ok(None);
    };
    let (profile, gap) = synthesize(c, vertices_per_period, mm as usize)?;
    Ok(Some(ClosureSolution {
        m: mm,
        k: kk,
        c,
        reduced_from: (g > 1).then_some((m, k)),
        profile,
        closure_gap: gap,
    }))
}

/// Samples the half oscillation from r1 (at angle 0) to r2, uniformly in
/// arclength, as (point) list including both ends.
fn half_arc(c: f64, samples: usize) -> Result<Vec<PlanarPoint>> {
    let r = roots(c)?;
    let span = r.f2 - r.f1;
    // dense table in u, then arclength resampling
    let dense = 16 * samples.max(8);
    let sub = GaussLegendre::new(12);
    let mut us = Vec::with_capacity(dense + 1);
    let mut phis = Vec::with_capacity(dense + 1);
    let mut pts = Vec::with_capacity(dense + 1);
    let mut phi = 0.0;
    for j in 0..=dense {
        let u = 0.5 * PI * j as f64 / dense as f64;
        if j > 0 {
            let u0 = 0.5 * PI * (j - 1) as f64 / dense as f64;
            phi += sub.integrate(|v| r.integrand(v, span), u0, u);
        }
        let s = u.sin();
        let f = r.f1 + span * s * s;
        us.push(u);
        phis.push(phi);
        pts.push(PlanarPoint::polar(f.exp(), phi));
    }
    // the last angle from the high-order rule, to avoid drift
    let total = r.angle_to(r.f2);
    let scale = total / phi;
    for p in pts.iter_mut() {
        let (rr, a) = (p.r(), p.phi());
        *p = PlanarPoint::polar(rr, a * scale);
    }
    for a in phis.iter_mut() {
        *a *= scale;
    }
    // equidistribute length plus turning, so the tight inner loops get
    // as many vertices as the long outer lobes
    let dl: Vec<f64> = pts.windows(2).map(|w| w[0].dist(w[1])).collect();
    // turning at each dense vertex; the ends copy their neighbours, which is
    // what the reflection through a turning point gives
    let tangent = |j: usize| (pts[j + 1] - pts[j]).normalized();
    let mut tau: Vec<f64> = (0..=dl.len())
        .map(|j| {
            if j == 0 || j == dl.len() {
                0.0
            } else {
                let (a, b) = (tangent(j - 1), tangent(j));
                a.cross(b).atan2(a.dot(b)).abs()
            }
        })
        .collect();
    let last = tau.len() - 1;
    tau[0] = tau[1];
    tau[last] = tau[last - 1];
    let turn: Vec<f64> = (0..dl.len()).map(|i| 0.5 * (tau[i] + tau[i + 1])).collect();
    let (lsum, tsum): (f64, f64) = (dl.iter().sum(), turn.iter().sum::<f64>().max(1e-300));
    let mut cum = vec![0.0];
    for i in 0..dl.len() {
        cum.push(cum.last().unwrap() + dl[i] / lsum + turn[i] / tsum);
    }
    let len = *cum.last().unwrap();
    let mut out = Vec::with_capacity(samples + 1);
    let mut seg = 0;
    for i in 0..=samples {
        let s = len * i as f64 / samples as f64;
        while seg + 2 < cum.len() && cum[seg + 1] < s {
            seg += 1;
        }
        let t = ((s - cum[seg]) / (cum[seg + 1] - cum[seg])).clamp(0.0, 1.0);
        let u = us[seg] + t * (us[seg + 1] - us[seg]);
        // re-evaluate exactly at u; interpolating the angle linearly leaves
        // a curvature error that does not shrink with the mesh
        let sn = u.sin();
        let f = r.f1 + span * sn * sn;
        let a = phis[seg] + scale * sub.integrate(|v| r.integrand(v, span), us[seg], u);
        out.push(PlanarPoint::polar(f.exp(), a));
    }
    Ok(out)
}

/// Polyline of the arc r1 → r2 (one half oscillation).
pub fn synthesize_arc(c: f64, samples: usize) -> Result<Vec<PlanarPoint>> {
    half_arc(c, samples)
}

/// Closed profile over `m` periods; returns the curve and the closure gap
/// between the start and the point reached after m periods.
pub fn synthesize(c: f64, vertices_per_period: usize, m: usize) -> Result<(ProfileCurve, f64)> {
    let half = vertices_per_period.max(8) / 2;
    let arc = half_arc(c, half)?;
    let psi = period(c)?;
    let mut one = Vec::with_capacity(2 * half);
    one.extend_from_slice(&arc[..half]);
    // mirror about the ray through the maximum; later periods are rigid
    // rotations, so the rounding of a large polar angle is shared by a
    // whole period instead of scattered between neighbours
    let rotate = |p: PlanarPoint, a: f64| {
        let (s, c) = a.sin_cos();
        PlanarPoint::new(c * p.x - s * p.y, s * p.x + c * p.y)
    };
    for i in (1..=half).rev() {
        one.push(rotate(arc[i].conj(), psi));
    }
    let mut pts = Vec::with_capacity(m * one.len());
    for j in 0..m {
        let rot = psi * j as f64;
        pts.extend(one.iter().map(|&p| rotate(p, rot)));
    }
    let end = PlanarPoint::polar(arc[0].r(), psi * m as f64);
    let gap = end.dist(pts[0]);
    Ok((ProfileCurve { components: vec![pts], class: SymmetryClass::Clifford }, gap))
}

/// Closed profile; fails with an open-arc error when m periods do not close.
pub fn synthesize_profile(c: f64, vertices_per_period: usize, m: usize) -> Result<ProfileCurve> {
    let (curve, gap) = synthesize(c, vertices_per_period, m)?;
    if gap > 1e-6 {
        return Err(Error::OpenArc(gap));
    }
    Ok(curve)
}

/// max |f′² − B(f, C)| over the vertices of component 0, f′ = d log r / dφ
/// from the fourth-order interpolant.
pub fn first_integral_residual(profile: &ProfileCurve, c: f64) -> f64 {
    let sp = ComponentSpline::new(&profile.components[0]);
    let mut worst: f64 = 0.0;
    for i in 0..sp.len() {
        let p = sp.eval(i as f64);
        let d = sp.deriv(i as f64);
        let fp = p.dot(d) / p.cross(d);
        worst = worst.max((fp * fp - first_integral(p.r2(), c)).abs());
    }
    worst
}

/// One catalog line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogEntry {
    pub m: u32,
    pub k: u32,
    pub c: f64,
    pub r1: f64,
    pub r2: f64,
    pub psi: f64,
    pub r_c: f64,
}

/// All closure solutions in lowest terms with m ≤ `m_max` on (27, c_max].
pub fn catalog(m_max: u32, c_max: f64) -> Result<Vec<CatalogEntry>> {
    let scan = period_scan(c_max)?;
    let lo = scan.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = scan.iter().map(|p| p.1).fold(0.0, f64::max);
    let mut out = vec![];
    for m in 1..=m_max {
        for k in 1..=m {
            if gcd(m, k) != 1 {
                continue;
            }
            let target = 2.0 * PI * k as f64 / m as f64;
            if target < lo || target > hi {
                continue;
            }
            for c in closure_constants(&scan, m, k) {
                let (r1, r2, _) = radial_roots(c)?;
                out.push(CatalogEntry { m, k, c, r1, r2, psi: period(c)?, r_c: cone_radius(c)? });
            }
        }
    }
    Ok(out)
}

pub fn catalog_csv(entries: &[CatalogEntry]) -> String {
    let mut s = String::from("m,k,C,r1,r2,psi,R_C\n");
    for e in entries {
        s.push_str(&format!(
            "{},{},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}\n",
            e.m, e.k, e.c, e.r1, e.r2, e.psi, e.r_c
        ));
    }
    s
}
