use super::point::point_segment_distance;
use super::{ComponentSpline, PlanarPoint};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Which Hamiltonian isotopy class the lifted torus belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryClass {
    Clifford,
    Chekanov,
}

impl SymmetryClass {
    pub fn flipped(self) -> Self {
        match self {
            SymmetryClass::Clifford => SymmetryClass::Chekanov,
            SymmetryClass::Chekanov => SymmetryClass::Clifford,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::Clifford => "clifford",
            SymmetryClass::Chekanov => "chekanov",
        }
    }
}

/// Coordinate axis of the profile plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Real,
    Imaginary,
}

impl Axis {
    pub fn other(self) -> Self {
        match self {
            Axis::Real => Axis::Imaginary,
            Axis::Imaginary => Axis::Real,
        }
    }

    /// Reflection fixing this axis pointwise.
    #[inline]
    pub fn reflect(self, p: PlanarPoint) -> PlanarPoint {
        match self {
            Axis::Real => p.conj(),
            Axis::Imaginary => -p.conj(),
        }
    }

    #[inline]
    fn project(self, p: PlanarPoint) -> PlanarPoint {
        match self {
            Axis::Real => PlanarPoint::new(p.x, 0.0),
            Axis::Imaginary => PlanarPoint::new(0.0, p.y),
        }
    }

    /// Signed coordinate transverse to the axis.
    #[inline]
    fn transverse(self, p: PlanarPoint) -> f64 {
        match self {
            Axis::Real => p.y,
            Axis::Imaginary => -p.x,
        }
    }

    /// Coordinate along the axis.
    #[inline]
    fn along(self, p: PlanarPoint) -> f64 {
        match self {
            Axis::Real => p.x,
            Axis::Imaginary => p.y,
        }
    }
}

/// Discretized equivariant profile curve.
///
/// Canonical layout, relied on by [`ProfileCurve::symmetrize`]:
/// * Clifford: one counterclockwise component, vertex count divisible by 4,
///   vertex 0 on the positive real axis. Then `v[N-i] = conj v[i]` and
///   `v[i+N/2] = -v[i]`.
/// * Chekanov: two counterclockwise components of equal even length with
///   `c1 = -c0`; `c0` is mirror symmetric about one coordinate axis and its
///   vertex 0 is the crossing of that axis farthest from the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub components: Vec<Vec<PlanarPoint>>,
    pub class: SymmetryClass,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveDoc {
    class: SymmetryClass,
    components: Vec<Vec<[f64; 2]>>,
}

impl ProfileCurve {
    /// Round circle of radius `r` about the origin with `n` vertices.
    pub fn circle(r: f64, n: usize) -> Self {
        let n = round_up(n.max(8), 4);
        let pts = (0..n).map(|i| PlanarPoint::polar(r, 2.0 * PI * i as f64 / n as f64)).collect();
        ProfileCurve { components: vec![pts], class: SymmetryClass::Clifford }
    }

    /// Star-shaped Clifford curve `r = rho(φ)`; `rho` must be even and
    /// π-periodic for the result to be equivariant.
    pub fn star<F: Fn(f64) -> f64>(rho: F, n: usize) -> Self {
        let n = round_up(n.max(8), 4);
        let pts = (0..n)
            .map(|i| {
                let phi = 2.0 * PI * i as f64 / n as f64;
                PlanarPoint::polar(rho(phi), phi)
            })
            .collect();
        ProfileCurve { components: vec![pts], class: SymmetryClass::Clifford }
    }

    /// Chekanov pair: circles of radius `radius` about `±center`, where
    /// `center` lies on a coordinate axis and the circles avoid the origin.
    pub fn chekanov_pair(center: PlanarPoint, radius: f64, n: usize) -> Result<Self> {
        if radius >= center.r() {
            return Err(Error::UnsupportedTopology("circle encloses the origin".into()));
        }
        let n = round_up(n.max(8), 2);
        let dir = center.phi();
        let pts = (0..n)
            .map(|i| center + PlanarPoint::polar(radius, dir + 2.0 * PI * i as f64 / n as f64))
            .collect::<Vec<_>>();
        let other = pts.iter().map(|p| -*p).collect();
        Ok(ProfileCurve { components: vec![pts, other], class: SymmetryClass::Chekanov })
    }

    /// Chekanov pair from one component; the partner is its negation.
    pub fn chekanov_from(c0: Vec<PlanarPoint>) -> Self {
        let c1 = c0.iter().map(|p| -*p).collect();
        ProfileCurve { components: vec![c0, c1], class: SymmetryClass::Chekanov }
    }

    /// Checks cheap structural invariants: vertex counts, finiteness and
    /// origin avoidance.
    pub fn validate(&self) -> Result<()> {
        let want = match self.class {
            SymmetryClass::Clifford => 1,
            SymmetryClass::Chekanov => 2,
        };
        if self.components.len() != want {
            return Err(Error::UnsupportedTopology(format!(
                "{} component(s) for class {}",
                self.components.len(),
                self.class.name()
            )));
        }
        for (ci, c) in self.components.iter().enumerate() {
            if c.len() < 8 {
                return Err(Error::UnsupportedTopology(format!("component {ci} has {} vertices", c.len())));
            }
            for (i, p) in c.iter().enumerate() {
                if !p.is_finite() {
                    return Err(Error::InvariantViolation(format!("non-finite vertex {i}")));
                }
                if p.r() < 1e-12 {
                    return Err(Error::NearOrigin(i));
                }
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }

    pub fn points(&self) -> impl Iterator<Item = &PlanarPoint> {
        self.components.iter().flatten()
    }

    pub fn min_radius(&self) -> f64 {
        self.points().map(|p| p.r()).fold(f64::INFINITY, f64::min)
    }

    pub fn max_radius(&self) -> f64 {
        self.points().map(|p| p.r()).fold(0.0, f64::max)
    }

    pub fn splines(&self) -> Vec<ComponentSpline> {
        self.components.iter().map(|c| ComponentSpline::new(c)).collect()
    }

    /// Homothety w ↦ λw.
    pub fn scaled(&self, lambda: f64) -> Self {
        ProfileCurve {
            components: self.components.iter().map(|c| c.iter().map(|p| *p * lambda).collect()).collect(),
            class: self.class,
        }
    }

    pub fn edge_lengths(&self, component: usize) -> Vec<f64> {
        let c = &self.components[component];
        (0..c.len()).map(|i| c[i].dist(c[(i + 1) % c.len()])).collect()
    }

    pub fn min_edge(&self) -> f64 {
        (0..self.components.len())
            .flat_map(|k| self.edge_lengths(k))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn mean_edge(&self) -> f64 {
        let (s, n) = (0..self.components.len())
            .flat_map(|k| self.edge_lengths(k))
            .fold((0.0, 0usize), |(s, n), e| (s + e, n + 1));
        s / n as f64
    }

    /// Winding number of `component` about `point`.
    pub fn winding_number(&self, component: usize, point: PlanarPoint) -> Result<i32> {
        winding_number(&self.components[component], point)
    }

    /// Mirror axis of the Chekanov component `c0`.
    pub fn chekanov_axis(&self) -> Axis {
        let p = self.components[0][0];
        if p.x.abs() >= p.y.abs() {
            Axis::Real
        } else {
            Axis::Imaginary
        }
    }

    /// Classifies the configuration from its topology alone.
    pub fn classify(&self) -> Result<SymmetryClass> {
        match self.components.len() {
            1 => {
                let w = winding_number(&self.components[0], PlanarPoint::ORIGIN)?;
                if w.abs() != 1 {
                    return Err(Error::UnsupportedTopology(format!("single component with winding {w}")));
                }
                let tol = 10.0 * self.mean_edge();
                if point_asymmetry(&self.components[0], &self.components[0]) > tol {
                    return Err(Error::UnsupportedTopology("single component is not point-symmetric".into()));
                }
                Ok(SymmetryClass::Clifford)
            }
            2 => {
                for c in &self.components {
                    let w = winding_number(c, PlanarPoint::ORIGIN)?;
                    if w != 0 {
                        return Err(Error::UnsupportedTopology(format!("pair component with winding {w}")));
                    }
                }
                let tol = 10.0 * self.mean_edge();
                if point_asymmetry(&self.components[0], &self.components[1]) > tol {
                    return Err(Error::UnsupportedTopology("components not swapped by negation".into()));
                }
                Ok(SymmetryClass::Chekanov)
            }
            k => Err(Error::UnsupportedTopology(format!("{k} components"))),
        }
    }

    /// Largest displacement between a vertex and the group average of its
    /// orbit; zero for exactly symmetric canonical curves.
    pub fn asymmetry(&self) -> f64 {
        self.symmetrize_unchecked().1
    }

    /// Projection onto exactly symmetric configurations. Idempotent bit for
    /// bit. Fails when the asymmetry exceeds the mean edge length.
    pub fn symmetrize(&self) -> Result<Self> {
        self.symmetrize_with(self.mean_edge())
    }

    pub fn symmetrize_with(&self, threshold: f64) -> Result<Self> {
        let (out, asym) = self.symmetrize_unchecked();
        if asym > threshold || !asym.is_finite() {
            return Err(Error::SymmetryBroken { asymmetry: asym, threshold });
        }
        Ok(out)
    }

    fn symmetrize_unchecked(&self) -> (Self, f64) {
        match self.class {
            SymmetryClass::Clifford => {
                let v = &self.components[0];
                let n = v.len();
                if n % 4 != 0 {
                    return (self.clone(), f64::INFINITY);
                }
                let mut out = v.clone();
                let mut asym: f64 = 0.0;
                for i in 0..=n / 4 {
                    let a = v[i];
                    let b = v[(n - i) % n].conj();
                    let c = -v[(i + n / 2) % n];
                    let d = -v[(n / 2 - i) % n].conj();
                    let mut u = ((a + b) + (c + d)) * 0.25;
                    if i == 0 {
                        u.y = 0.0;
                    }
                    if i == n / 4 {
                        u.x = 0.0;
                    }
                    asym = asym.max(a.dist(u)).max(b.dist(u)).max(c.dist(u)).max(d.dist(u));
                    out[i] = u;
                    out[(n - i) % n] = u.conj();
                    out[(i + n / 2) % n] = -u;
                    out[(n / 2 - i) % n] = -u.conj();
                }
                (ProfileCurve { components: vec![out], class: self.class }, asym)
            }
            SymmetryClass::Chekanov => {
                let (c0, c1) = (&self.components[0], &self.components[1]);
                let n = c0.len();
                if n % 2 != 0 || c1.len() != n {
                    return (self.clone(), f64::INFINITY);
                }
                let ax = self.chekanov_axis();
                let mut out = c0.clone();
                let mut asym: f64 = 0.0;
                for i in 0..=n / 2 {
                    let j = (n - i) % n;
                    let a = c0[i];
                    let b = ax.reflect(c0[j]);
                    let c = -c1[i];
                    let d = -ax.reflect(c1[j]);
                    let mut u = ((a + b) + (c + d)) * 0.25;
                    if i == 0 || i == n / 2 {
                        u = ax.project(u);
                    }
                    asym = asym.max(a.dist(u)).max(b.dist(u)).max(c.dist(u)).max(d.dist(u));
                    out[i] = u;
                    out[j] = ax.reflect(u);
                }
                (ProfileCurve::chekanov_from(out), asym)
            }
        }
    }

    /// Resamples every component to `n` vertices in canonical layout, with
    /// spacing proportional to `1/density` (uniform arclength when `None`).
    /// The density is evaluated per edge of the current polyline.
    pub fn resampled(&self, n: usize, density: Option<&dyn Fn(&ComponentSpline, usize) -> f64>) -> Result<Self> {
        match self.class {
            SymmetryClass::Clifford => {
                let n = round_up(n, 4);
                let sp = ComponentSpline::new(&self.components[0]);
                let start = axis_start(&sp, Axis::Real, true)?;
                let pts = resample_spline(&sp, n, start, density);
                ProfileCurve { components: vec![pts], class: self.class }.symmetrize()
            }
            SymmetryClass::Chekanov => {
                let n = round_up(n, 2);
                let ax = guess_axis(&self.components[0]);
                let sp = ComponentSpline::new(&self.components[0]);
                let start = axis_start(&sp, ax, false)?;
                let pts = resample_spline(&sp, n, start, density);
                ProfileCurve::chekanov_from(pts).symmetrize()
            }
        }
    }

    /// Puts an arbitrary valid configuration into canonical layout: orients
    /// components counterclockwise, orders the Chekanov pair, resamples.
    pub fn canonicalize(mut self, n: usize) -> Result<Self> {
        self.validate()?;
        for c in &mut self.components {
            if signed_area(c) < 0.0 {
                c.reverse();
            }
        }
        if self.class == SymmetryClass::Chekanov {
            let ax = guess_axis(&self.components[0]);
            let key = |c: &Vec<PlanarPoint>| ax.along(centroid(c));
            if key(&self.components[0]) < key(&self.components[1]) {
                self.components.swap(0, 1);
            }
        }
        self.resampled(n, None)
    }

    /// Per-vertex Lagrangian angle θ = −atan(r′/(rφ′)) relative to the
    /// circle torus, unwrapped along each component.
    pub fn relative_angle(&self) -> Result<Vec<Vec<f64>>> {
        let mut out = Vec::with_capacity(self.components.len());
        let mut offset = 0;
        for c in &self.components {
            let n = c.len();
            let mut th = Vec::with_capacity(n);
            for i in 0..n {
                let a = c[(i + n - 1) % n];
                let b = c[(i + 1) % n];
                let p = c[i];
                let dr = 0.5 * (b.r() - a.r());
                let dphi = 0.5 * wrap_angle(b.phi() - a.phi());
                if dr == 0.0 && dphi == 0.0 {
                    return Err(Error::DegenerateTangent(offset + i));
                }
                th.push(-dr.atan2(p.r() * dphi));
            }
            unwrap_in_place(&mut th);
            out.push(th);
            offset += n;
        }
        Ok(out)
    }

    /// True when no two non-adjacent edges of the configuration intersect.
    pub fn is_embedded(&self) -> bool {
        let mut edges = vec![];
        for (k, c) in self.components.iter().enumerate() {
            for i in 0..c.len() {
                edges.push((k, i, c[i], c[(i + 1) % c.len()]));
            }
        }
        for a in 0..edges.len() {
            let (ka, ia, p0, p1) = edges[a];
            let (minx, maxx) = (p0.x.min(p1.x), p0.x.max(p1.x));
            let (miny, maxy) = (p0.y.min(p1.y), p0.y.max(p1.y));
            for e in edges.iter().skip(a + 1) {
                let (kb, ib, q0, q1) = *e;
                if q0.x.max(q1.x) < minx || q0.x.min(q1.x) > maxx || q0.y.max(q1.y) < miny || q0.y.min(q1.y) > maxy {
                    continue;
                }
                if ka == kb {
                    let n = self.components[ka].len();
                    if ib == (ia + 1) % n || ia == (ib + 1) % n {
                        continue;
                    }
                }
                if segments_intersect(p0, p1, q0, q1) {
                    return false;
                }
            }
        }
        true
    }

    /// Symmetric Hausdorff distance between the polylines, measured from
    /// vertices to edges.
    pub fn hausdorff(&self, other: &ProfileCurve) -> f64 {
        one_sided(self, other).max(one_sided(other, self))
    }

    /// Hausdorff distance to the round circle of radius `r` about 0.
    pub fn hausdorff_to_circle(&self, r: f64) -> f64 {
        let mut d: f64 = 0.0;
        for p in self.points() {
            d = d.max((p.r() - r).abs());
        }
        // every direction must be covered by the curve for the reverse bound
        if self.class == SymmetryClass::Clifford {
            let c = &self.components[0];
            for i in 0..c.len() {
                let gap = wrap_angle(c[(i + 1) % c.len()].phi() - c[i].phi()).abs();
                d = d.max(r * (1.0 - (0.5 * gap).cos()));
            }
        }
        d
    }

    pub fn to_json(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{{\"class\":\"{}\",\"components\":[", self.class.name());
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push('[');
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(s, "[{:.17e},{:.17e}]", p.x, p.y);
            }
            s.push(']');
        }
        s.push_str("]}");
        s
    }

    /// Parses the exchange format without resampling.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CurveDoc = serde_json::from_str(text)?;
        let curve = ProfileCurve {
            components: doc
                .components
                .into_iter()
                .map(|c| c.into_iter().map(|[x, y]| PlanarPoint::new(x, y)).collect())
                .collect(),
            class: doc.class,
        };
        curve.validate()?;
        Ok(curve)
    }
}

fn round_up(n: usize, k: usize) -> usize {
    n.div_ceil(k) * k
}

pub(crate) fn wrap_angle(a: f64) -> f64 {
    let mut x = a.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

pub(crate) fn unwrap_in_place(v: &mut [f64]) {
    for i in 1..v.len() {
        let d = wrap_angle(v[i] - v[i - 1]);
        v[i] = v[i - 1] + d;
    }
}

pub(crate) fn signed_area(c: &[PlanarPoint]) -> f64 {
    let n = c.len();
    (0..n).map(|i| c[i].cross(c[(i + 1) % n])).sum::<f64>() * 0.5
}

fn centroid(c: &[PlanarPoint]) -> PlanarPoint {
    let s = c.iter().fold(PlanarPoint::ORIGIN, |a, p| a + *p);
    s * (1.0 / c.len() as f64)
}

fn guess_axis(c: &[PlanarPoint]) -> Axis {
    let m = centroid(c);
    if m.x.abs() >= m.y.abs() {
        Axis::Real
    } else {
        Axis::Imaginary
    }
}

/// Standard winding number by summed angle increments.
pub fn winding_number(c: &[PlanarPoint], p: PlanarPoint) -> Result<i32> {
    let n = c.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = c[i];
        let b = c[(i + 1) % n];
        if point_segment_distance(p, a, b) < 1e-14 {
            return Err(Error::OnBoundary);
        }
        let u = a - p;
        let v = b - p;
        total += u.cross(v).atan2(u.dot(v));
    }
    Ok((total / (2.0 * PI)).round() as i32)
}

/// Max distance from each vertex of `a` negated to the polyline `b`.
fn point_asymmetry(a: &[PlanarPoint], b: &[PlanarPoint]) -> f64 {
    let mut worst: f64 = 0.0;
    for p in a {
        let q = -*p;
        let mut best = f64::INFINITY;
        for i in 0..b.len() {
            best = best.min(point_segment_distance(q, b[i], b[(i + 1) % b.len()]));
        }
        worst = worst.max(best);
    }
    worst
}

fn one_sided(a: &ProfileCurve, b: &ProfileCurve) -> f64 {
    let mut worst: f64 = 0.0;
    for p in a.points() {
        let mut best = f64::INFINITY;
        for c in &b.components {
            for i in 0..c.len() {
                best = best.min(point_segment_distance(*p, c[i], c[(i + 1) % c.len()]));
            }
        }
        worst = worst.max(best);
    }
    worst
}

pub(crate) fn segments_intersect(p0: PlanarPoint, p1: PlanarPoint, q0: PlanarPoint, q1: PlanarPoint) -> bool {
    let d1 = (p1 - p0).cross(q0 - p0);
    let d2 = (p1 - p0).cross(q1 - p0);
    let d3 = (q1 - q0).cross(p0 - q0);
    let d4 = (q1 - q0).cross(p1 - q0);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Parameter where the spline crosses `axis` at the crossing farthest from
/// the origin (Chekanov) or on the positive half-axis (Clifford), moving in
/// the counterclockwise direction.
fn axis_start(sp: &ComponentSpline, axis: Axis, positive_half: bool) -> Result<f64> {
    let v = sp.vertices();
    let n = v.len();
    let mut best: Option<(f64, f64)> = None;
    for i in 0..n {
        let a = axis.transverse(v[i]);
        let b = axis.transverse(v[(i + 1) % n]);
        let exact = a == 0.0;
        if !(exact || (a < 0.0 && b > 0.0)) {
            continue;
        }
        let u = if exact { i as f64 } else { sp.refine_crossing(i, |p| axis.transverse(p)) };
        let along = axis.along(sp.eval(u));
        if positive_half && along <= 0.0 {
            continue;
        }
        let key = along.abs();
        if best.map_or(true, |(_, k)| key > k) {
            best = Some((u, key));
        }
    }
    best.map(|(u, _)| u).ok_or_else(|| Error::UnsupportedTopology("component never crosses its mirror axis".into()))
}

fn resample_spline(
    sp: &ComponentSpline,
    n: usize,
    start: f64,
    density: Option<&dyn Fn(&ComponentSpline, usize) -> f64>,
) -> Vec<PlanarPoint> {
    let m = sp.len();
    let lens = sp.edge_lengths();
    let w: Vec<f64> = (0..m).map(|i| lens[i] * density.map_or(1.0, |d| d(sp, i))).collect();
    let mut cum = vec![0.0; m + 1];
    for i in 0..m {
        cum[i + 1] = cum[i] + w[i];
    }
    let total = cum[m];
    let sigma_of = |u: f64| {
        let i = (u.floor() as usize).min(m - 1);
        cum[i] + (u - i as f64) * w[i]
    };
    let s0 = sigma_of(start.rem_euclid(m as f64));
    let mut out = Vec::with_capacity(n);
    let mut edge = 0usize;
    let mut targets: Vec<(usize, f64)> = (0..n).map(|j| (j, (s0 + total * j as f64 / n as f64) % total)).collect();
    targets.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let mut placed = vec![PlanarPoint::ORIGIN; n];
    for (j, s) in targets {
        while edge + 1 < m && cum[edge + 1] <= s {
            edge += 1;
        }
        let frac = if w[edge] > 0.0 { (s - cum[edge]) / w[edge] } else { 0.0 };
        placed[j] = sp.eval(edge as f64 + frac.clamp(0.0, 1.0));
    }
    out.extend(placed);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_is_canonical_and_symmetric() {
        let c = ProfileCurve::circle(1.0, 64);
        assert_eq!(c.classify().unwrap(), SymmetryClass::Clifford);
        assert!(c.asymmetry() < 1e-15);
        let s = c.symmetrize().unwrap();
        assert_eq!(s.symmetrize().unwrap(), s);
    }

    #[test]
    fn chekanov_pair_classifies() {
        let c = ProfileCurve::chekanov_pair(PlanarPoint::new(1.0, 0.0), 0.25, 64).unwrap();
        assert_eq!(c.classify().unwrap(), SymmetryClass::Chekanov);
        assert_eq!(c.chekanov_axis(), Axis::Real);
        let s = c.symmetrize().unwrap();
        assert!(s.hausdorff(&c) < 1e-14);
        let up = ProfileCurve::chekanov_pair(PlanarPoint::new(0.0, 1.0), 0.25, 64).unwrap();
        assert_eq!(up.chekanov_axis(), Axis::Imaginary);
        assert!(up.asymmetry() < 1e-14);
    }

    #[test]
    fn three_components_rejected() {
        let mut c = ProfileCurve::chekanov_pair(PlanarPoint::new(1.0, 0.0), 0.25, 32).unwrap();
        c.components.push(ProfileCurve::circle(3.0, 32).components.remove(0));
        assert!(matches!(c.classify(), Err(Error::UnsupportedTopology(_))));
    }

    #[test]
    fn winding_examples() {
        let c = ProfileCurve::circle(1.0, 64);
        let v = &c.components[0];
        assert_eq!(winding_number(v, PlanarPoint::ORIGIN).unwrap(), 1);
        assert_eq!(winding_number(v, PlanarPoint::new(3.0, 0.0)).unwrap(), 0);
        let rev: Vec<_> = v.iter().rev().copied().collect();
        assert_eq!(winding_number(&rev, PlanarPoint::ORIGIN).unwrap(), -1);
        assert_eq!(winding_number(v, v[3]), Err(Error::OnBoundary));
    }

    #[test]
    fn symmetrize_rejects_large_asymmetry() {
        let mut c = ProfileCurve::circle(1.0, 64);
        let h = c.mean_edge();
        c.components[0][5].x += 10.0 * h;
        assert!(matches!(c.symmetrize(), Err(Error::SymmetryBroken { .. })));
    }

    #[test]
    fn relative_angle_examples() {
        let c = ProfileCurve::circle(1.0, 64);
        for t in &c.relative_angle().unwrap()[0] {
            assert!(t.abs() < 1e-12);
        }
        // logarithmic spiral r = e^φ sampled as an open arc (interior vertices)
        let pts: Vec<_> = (0..200).map(|i| {
            let phi = -1.0 + 2.0 * i as f64 / 199.0;
            PlanarPoint::polar(phi.exp(), phi)
        }).collect();
        let c = ProfileCurve { components: vec![pts], class: SymmetryClass::Clifford };
        let th = &c.relative_angle().unwrap()[0];
        for t in &th[5..195] {
            assert!((t + PI / 4.0).abs() < 1e-4, "{t}");
        }
    }

    #[test]
    fn json_roundtrip_is_exact() {
        let c = ProfileCurve::chekanov_pair(PlanarPoint::new(1.0, 0.0), 0.3, 32).unwrap();
        let back = ProfileCurve::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(ProfileCurve::from_json(r#"{"class":"clifford","components":[],"extra":1}"#).is_err());
    }

    #[test]
    fn canonicalize_reorders_and_resamples() {
        let c = ProfileCurve::star(|phi| 1.0 + 0.1 * (2.0 * phi).cos(), 100);
        let mut rot = c.clone();
        rot.components[0].rotate_left(7);
        rot.components[0].reverse();
        let canon = rot.canonicalize(128).unwrap();
        assert_eq!(canon.components[0].len(), 128);
        assert!(canon.components[0][0].y == 0.0 && canon.components[0][0].x > 0.0);
        assert!(canon.hausdorff(&c) < 1e-3);
    }
}
