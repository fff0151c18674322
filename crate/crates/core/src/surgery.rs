//! Neck-to-neck surgery: when a neck pinches at the origin across one
//! axis, cut it out and reconnect the four loose ends across the other
//! axis, then rescale radially back to the monotone area.

use crate::cg_diagnostics::{disc_component, monotone_defect, monotone_target};
use crate::cp2_core::{
    cone_intersections, disc_region, symplectic_area, Axis, ComponentSpline, ConeSpec, PlanarPoint, ProfileCurve,
    SymmetryClass,
};
use crate::curvature_flow::{
    adapted_resample, mesh_weights, run, EventPayload, FlowConfig, FlowEvent, FlowEventKind, FlowState, Sample,
};
use crate::error::{Error, Result};
use crate::numerics::bisect;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

/// Largest cone widening tried by the scale probe.
pub const EPS0: f64 = 0.1;
const PROBE_GROWTH: usize = 8;
const RETRIES: usize = 5;
const CONNECTOR_SAMPLES: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeckSpec {
    pub r: f64,
    pub epsilon: f64,
    pub p_plus: PlanarPoint,
    /// Mirror image of `p_plus` in `axis_before`.
    pub p_minus: PlanarPoint,
    pub axis_before: Axis,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurgeryRecord {
    pub t: f64,
    pub neck: NeckSpec,
    pub class_before: SymmetryClass,
    pub class_after: SymmetryClass,
    pub n_before: usize,
    pub n_after: usize,
    pub lambda: f64,
    pub defect_after: f64,
    /// Probe radii halved before the splice succeeded.
    pub retries: usize,
    #[serde(skip)]
    pub before: Option<ProfileCurve>,
    #[serde(skip)]
    pub after: Option<ProfileCurve>,
}

impl SurgeryRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// Crossings of C⁰_{π/2}, divided by four.
pub fn cone_index(curve: &ProfileCurve) -> usize {
    cone_intersections(curve, &ConeSpec::symmetric(FRAC_PI_2)).0 / 4
}

// quarter turns taking the neck onto the positive real axis and back
fn to_real(p: PlanarPoint, axis: Axis) -> PlanarPoint {
    match axis {
        Axis::Real => p,
        Axis::Imaginary => PlanarPoint::new(p.y, -p.x),
    }
}

fn from_real(p: PlanarPoint, axis: Axis) -> PlanarPoint {
    match axis {
        Axis::Real => p,
        Axis::Imaginary => PlanarPoint::new(-p.y, p.x),
    }
}

fn rotate_curve(curve: &ProfileCurve, f: impl Fn(PlanarPoint) -> PlanarPoint) -> ProfileCurve {
    ProfileCurve {
        components: curve.components.iter().map(|c| c.iter().map(|p| f(*p)).collect()).collect(),
        class: curve.class,
    }
}

/// Axis crossed by the arc closest to the origin.
fn neck_axis(curve: &ProfileCurve) -> Axis {
    let p = curve.points().fold(PlanarPoint::new(f64::INFINITY, 0.0), |m, p| if p.r2() < m.r2() { *p } else { m });
    if p.x.abs() >= p.y.abs() {
        Axis::Real
    } else {
        Axis::Imaginary
    }
}

/// Crossing of the neck with the upper line of C⁰_{π/2+2ε} in the ball,
/// in the frame where the neck crosses the real axis.
struct Hit {
    component: usize,
    u_plus: f64,
    u_minus: f64,
    p_plus: PlanarPoint,
}

fn neck_hit(curve: &ProfileCurve, r: f64, eps: f64) -> Option<Hit> {
    let (_, xs) = cone_intersections(curve, &ConeSpec::symmetric(FRAC_PI_2 + 2.0 * eps));
    let up = xs.iter().find(|x| x.point.r() < r && x.point.x > 0.0 && x.point.y > 0.0)?;
    let mirror = up.point.conj();
    let down = xs
        .iter()
        .filter(|x| x.component == up.component)
        .min_by(|a, b| a.point.dist(mirror).partial_cmp(&b.point.dist(mirror)).unwrap())?;
    if down.point.dist(mirror) > 1e-6 * r.max(1e-3) {
        return None;
    }
    Some(Hit { component: up.component, u_plus: up.parameter, u_minus: down.parameter, p_plus: up.point })
}

/// Largest ε below ε₀ for which the curve meets C⁰_{π/2+2ε} inside B_r on
/// the neck, in the real-axis frame.
fn probe(curve: &ProfileCurve, r: f64, eps0: f64) -> Option<f64> {
    let grid: Vec<f64> = (1..=32).map(|j| eps0 * (j as f64 - 0.5) / 32.0).collect();
    let j = grid.iter().rposition(|e| neck_hit(curve, r, *e).is_some())?;
    let (mut lo, mut hi) = (grid[j], if j + 1 < grid.len() { grid[j + 1] } else { eps0 });
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if neck_hit(curve, r, mid).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

const NEAR_SINGULAR: f64 = 1e-2;

/// Looks for the pinching neck inside B_r. Only near-singular states
/// qualify (min radius below 1e-2).
pub fn detect_neck(state: &FlowState, r: f64, eps0: f64) -> Option<NeckSpec> {
    detect_neck_gated(state, r, eps0, NEAR_SINGULAR)
}

fn detect_neck_gated(state: &FlowState, r: f64, eps0: f64, gate: f64) -> Option<NeckSpec> {
    if state.min_radius >= gate || state.min_radius >= r {
        return None;
    }
    let axis = neck_axis(&state.curve);
    let rotated = rotate_curve(&state.curve, |p| to_real(p, axis));
    let eps = probe(&rotated, r, eps0)?;
    let hit = neck_hit(&rotated, r, eps)?;
    let p_plus = from_real(hit.p_plus, axis);
    Some(NeckSpec { r, epsilon: eps, p_plus, p_minus: axis.reflect(p_plus), axis_before: axis })
}

/// Points of the spline from `u0` forward to `u1`, endpoints included.
fn arc_points(sp: &ComponentSpline, u0: f64, u1: f64) -> Vec<PlanarPoint> {
    let n = sp.len() as f64;
    let span = (u1 - u0).rem_euclid(n);
    let mut out = vec![sp.eval(u0)];
    let mut k = u0.floor() + 1.0;
    while k < u0 + span {
        if k - u0 > 1e-6 && u0 + span - k > 1e-6 {
            out.push(sp.eval(k));
        }
        k += 1.0;
    }
    out.push(sp.eval(u0 + span));
    out
}

fn hermite(p: PlanarPoint, tp: PlanarPoint, q: PlanarPoint, tq: PlanarPoint, m: usize) -> Vec<PlanarPoint> {
    let l = p.dist(q);
    (1..m)
        .map(|j| {
            let s = j as f64 / m as f64;
            let (s2, s3) = (s * s, s * s * s);
            p * (2.0 * s3 - 3.0 * s2 + 1.0)
                + tp * (l * (s3 - 2.0 * s2 + s))
                + q * (-2.0 * s3 + 3.0 * s2)
                + tq * (l * (s3 - s2))
        })
        .collect()
}

/// Path from `p` to `q` (tangents `tp`, `tq`, unit) through the circle
/// arc tangent to the rays at angles β and π − β at radius `r2`. Crosses
/// the positive imaginary axis; goes right to left when `p` is on the
/// right.
fn connector(p: PlanarPoint, tp: PlanarPoint, q: PlanarPoint, tq: PlanarPoint, beta: f64, r2: f64) -> Vec<PlanarPoint> {
    let rho = r2 / beta.tan();
    let centre = PlanarPoint::new(0.0, r2 / beta.sin());
    let right = PlanarPoint::polar(r2, beta);
    let left = PlanarPoint::new(-right.x, right.y);
    let th_r = (right.y - centre.y).atan2(right.x);
    let th_l = -std::f64::consts::PI - th_r;
    let arc = |from: f64, to: f64| -> Vec<PlanarPoint> {
        (0..=CONNECTOR_SAMPLES)
            .map(|j| centre + PlanarPoint::polar(rho, from + (to - from) * j as f64 / CONNECTOR_SAMPLES as f64))
            .collect()
    };
    let ray_r = PlanarPoint::polar(1.0, beta);
    let ray_l = PlanarPoint::new(-ray_r.x, ray_r.y);
    let mut out = vec![];
    if p.x > 0.0 {
        out.extend(hermite(p, tp, right, -ray_r, CONNECTOR_SAMPLES));
        out.extend(arc(th_r, th_l));
        out.extend(hermite(left, ray_l, q, tq, CONNECTOR_SAMPLES));
    } else {
        out.extend(hermite(p, tp, left, -ray_l, CONNECTOR_SAMPLES));
        out.extend(arc(th_l, th_r));
        out.extend(hermite(right, ray_r, q, tq, CONNECTOR_SAMPLES));
    }
    out
}

/// Piecewise-linear redistribution of a closed polyline by the flow's
/// mesh weights. Spline tangents are meaningless across the abrupt spacing
/// jumps of a freshly spliced curve, straight segments are not.
fn linear_resample(c: &[PlanarPoint], n: usize) -> Vec<PlanarPoint> {
    let m = c.len();
    let w = mesh_weights(c);
    let total: f64 = w.iter().sum();
    let mut out = Vec::with_capacity(n);
    let (mut edge, mut acc) = (0usize, 0.0);
    for j in 0..n {
        let s = total * j as f64 / n as f64;
        while edge + 1 < m && acc + w[edge] <= s {
            acc += w[edge];
            edge += 1;
        }
        let f = ((s - acc) / w[edge]).clamp(0.0, 1.0);
        out.push(c[edge] + (c[(edge + 1) % m] - c[edge]) * f);
    }
    out
}

fn fail(msg: &str) -> Error {
    Error::SurgeryFailed(msg.into())
}

/// Excises the neck and splices across the other axis; the output has the
/// other topological class and `n` vertices per component.
pub fn neck_to_neck(curve: &ProfileCurve, neck: &NeckSpec) -> Result<ProfileCurve> {
    neck_to_neck_n(curve, neck, curve.components[0].len())
}

fn neck_to_neck_n(curve: &ProfileCurve, neck: &NeckSpec, n: usize) -> Result<ProfileCurve> {
    let axis = neck.axis_before;
    let rot = rotate_curve(curve, |p| to_real(p, axis));
    let hit = neck_hit(&rot, neck.r, neck.epsilon).ok_or_else(|| fail("neck not found at the given scale"))?;
    let sp = ComponentSpline::new(&rot.components[hit.component]);
    let m = sp.len() as f64;
    // of the two arcs between p⁻ and p⁺, the neck is the one inside |p⁺|
    let inner_fwd = {
        let span = (hit.u_minus - hit.u_plus).rem_euclid(m);
        (1..16).all(|j| sp.eval(hit.u_plus + span * j as f64 / 16.0).r() < hit.p_plus.r() * 1.0001)
    };
    let rp = hit.p_plus.r();
    let beta = FRAC_PI_4 + 0.5 * neck.epsilon;
    let r2 = 0.5 * rp;
    let tangent = |u: f64| sp.deriv(u).normalized();
    let (class, pieces) = match rot.class {
        SymmetryClass::Chekanov => {
            // c0 loses its tip; the outer arc runs from p⁻ round to p⁺
            if !inner_fwd {
                return Err(fail("Chekanov neck has unexpected orientation"));
            }
            let kept = arc_points(&sp, hit.u_minus, hit.u_plus);
            let (p, tp) = (hit.p_plus, tangent(hit.u_plus));
            let (q, tq) = (-sp.eval(hit.u_minus), -tangent(hit.u_minus));
            let upper = connector(p, tp, q, tq, beta, r2);
            let mut all = kept.clone();
            all.extend(upper.iter().copied());
            all.extend(kept.iter().map(|x| -*x));
            all.extend(upper.iter().map(|x| -*x));
            (SymmetryClass::Clifford, vec![all])
        }
        SymmetryClass::Clifford => {
            if inner_fwd {
                return Err(fail("Clifford neck has unexpected orientation"));
            }
            // upper half: from p⁺ forward to −p⁻, closed by the connector
            // canonical Clifford layout is point symmetric vertex by vertex
            let u_far = (hit.u_minus + m / 2.0).rem_euclid(m);
            let kept = arc_points(&sp, hit.u_plus, u_far);
            let p = *kept.last().unwrap();
            let tp = tangent(u_far);
            let (q, tq) = (hit.p_plus, tangent(hit.u_plus));
            let mut upper = kept;
            upper.extend(connector(p, tp, q, tq, beta, r2));
            let lower: Vec<_> = upper.iter().map(|x| -*x).collect();
            (SymmetryClass::Chekanov, vec![upper, lower])
        }
    };
    let pieces = pieces.iter().map(|c| linear_resample(c, 4 * n)).collect();
    let dense = ProfileCurve { components: pieces, class };
    let back = rotate_curve(&dense, |p| from_real(p, axis));
    if !back.is_embedded() {
        return Err(fail("splice crosses the curve"));
    }
    let out = adapted_resample(&back, n)?;
    if !out.is_embedded() {
        return Err(fail("resampled splice self-intersects"));
    }
    if out.classify()? != class {
        return Err(fail("splice produced the wrong topology"));
    }
    Ok(out)
}

/// Homothety w ↦ λw restoring the monotone disc area, by bisection on λ.
pub fn monotone_renormalize(curve: &ProfileCurve) -> Result<(ProfileCurve, f64)> {
    let class = curve.classify()?;
    let target = monotone_target(class);
    let k = disc_component(curve);
    let area = |l: f64| symplectic_area(&disc_region(&curve.scaled(l), k)).map(|a| a - target);
    let a1 = area(1.0)?;
    if a1.abs() < 1e-12 {
        return Ok((curve.clone(), 1.0));
    }
    // a Chekanov disc misses the origin, so its area is not monotone in λ
    // over (0, ∞); take the sign change nearest to λ = 1 on either side
    let mut bracket = None;
    let (mut up, mut down) = (1.0f64, 1.0f64);
    for _ in 0..60 {
        let next = up * 1.25;
        if area(next)? * a1 < 0.0 {
            bracket = Some((up, next));
            break;
        }
        up = next;
        let next = down / 1.25;
        if area(next)? * a1 < 0.0 {
            bracket = Some((next, down));
            break;
        }
        down = next;
    }
    let Some((lo, hi)) = bracket else {
        return Err(Error::RenormalizationFailed(format!("area {:.6} cannot reach {target:.6}", a1 + target)));
    };
    let lambda = bisect(|l| area(l).unwrap_or(f64::NAN), lo, hi, 1e-15)?;
    let out = curve.scaled(lambda);
    let d = monotone_defect(&out)?.defect;
    if d >= 1e-10 {
        return Err(Error::RenormalizationFailed(format!("defect {d:e} after rescaling")));
    }
    Ok((out, lambda))
}

/// Result of a flow with surgeries.
#[derive(Debug, Clone)]
pub struct SurgeryRun {
    pub state: FlowState,
    pub records: Vec<SurgeryRecord>,
    /// One trajectory per smooth flow segment.
    pub segments: Vec<Vec<Sample>>,
    pub events: Vec<FlowEvent>,
}

impl SurgeryRun {
    pub fn terminal(&self) -> Option<FlowEventKind> {
        self.events.last().map(|e| e.kind)
    }
}

/// Tries the splice at probe radius `r`, enlarging the ball until the
/// probe fires, and halving on a failed splice.
fn attempt(state: &FlowState, config: &FlowConfig) -> Result<(NeckSpec, ProfileCurve, usize)> {
    let gate = 10.0 * config.singular_radius;
    let mut last_err = fail("scale probe never fired");
    let base = 10.0 * state.min_radius;
    let mut radii: Vec<f64> = (0..PROBE_GROWTH).map(|k| base * 2f64.powi(k as i32)).filter(|r| *r < 0.5).collect();
    if radii.is_empty() {
        radii.push(base);
    }
    for r0 in radii {
        for retry in 0..=RETRIES {
            let r = r0 / 2f64.powi(retry as i32);
            let Some(neck) = detect_neck_gated(state, r, EPS0, gate) else {
                break;
            };
            match neck_to_neck_n(&state.curve, &neck, config.vertices_per_component) {
                Ok(c) => return Ok((neck, c, retry)),
                Err(e) => last_err = e,
            }
        }
    }
    Err(last_err)
}

/// Runs the flow, operating on every neck, until convergence or a halt.
/// Each surgery must lower the cone index n.
pub fn flow_with_surgery(state: FlowState, config: &FlowConfig) -> Result<SurgeryRun> {
    config.validate()?;
    let initial_class = state.curve.classify()?;
    if initial_class != state.curve.class {
        return Err(Error::InvariantViolation("recorded class disagrees with topology".into()));
    }
    let n0 = cone_index(&state.curve);
    let mut state = state;
    let mut records: Vec<SurgeryRecord> = vec![];
    let mut segments = vec![];
    let t_end = state.t + config.max_time;
    loop {
        let cfg = FlowConfig { max_time: (t_end - state.t).max(0.0), ..config.clone() };
        let out = run(state, &cfg)?;
        segments.push(out.trajectory);
        state = out.state;
        if out.singularity.is_none() {
            break;
        }
        let (neck, spliced, retries) = match attempt(&state, config) {
            Ok(x) => x,
            Err(e) => {
                state.event_log.push(FlowEvent {
                    kind: FlowEventKind::Halted,
                    t: state.t,
                    payload: EventPayload::Halt { reason: e.to_string() },
                });
                break;
            }
        };
        state.event_log.push(FlowEvent {
            kind: FlowEventKind::ScaleProbeHit,
            t: state.t,
            payload: EventPayload::Probe { epsilon: neck.epsilon, points: vec![neck.p_plus, neck.p_minus] },
        });
        let n_before = cone_index(&state.curve);
        let (renormed, lambda) = monotone_renormalize(&spliced)?;
        let n_after = cone_index(&renormed);
        if cone_index(&spliced) != n_after {
            return Err(Error::InvariantViolation("renormalization changed the cone count".into()));
        }
        if n_after >= n_before {
            return Err(Error::InvariantViolation(format!("surgery took n from {n_before} to {n_after}")));
        }
        let record = SurgeryRecord {
            t: state.t,
            neck,
            class_before: state.curve.class,
            class_after: renormed.class,
            n_before,
            n_after,
            lambda,
            defect_after: monotone_defect(&renormed)?.defect,
            retries,
            before: Some(state.curve.clone()),
            after: Some(renormed.clone()),
        };
        records.push(record.clone());
        if records.len() + 1 > n0.max(1) {
            return Err(Error::InvariantViolation(format!("{} surgeries from n = {n0}", records.len())));
        }
        let mut next = FlowState::new(renormed)?;
        next.t = state.t;
        next.step_count = state.step_count;
        next.event_log = std::mem::take(&mut state.event_log);
        next.event_log.push(FlowEvent {
            kind: FlowEventKind::SurgeryPerformed,
            t: state.t,
            payload: EventPayload::Surgery(Box::new(record)),
        });
        state = next;
    }
    let events = state.event_log.clone();
    Ok(SurgeryRun { state, records, segments, events })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn renormalize_examples() {
        let (c, l) = monotone_renormalize(&ProfileCurve::circle(FRAC_1_SQRT_2, 512)).unwrap();
        assert!((l - 2f64.sqrt()).abs() < 1e-9);
        assert!((c.max_radius() - 1.0).abs() < 1e-9);
        let (_, l) = monotone_renormalize(&ProfileCurve::circle(1.0, 512)).unwrap();
        assert!((l - 1.0).abs() < 1e-9);
    }

    #[test]
    fn renormalized_chekanov_hits_target() {
        let thin = ProfileCurve::chekanov_pair(PlanarPoint::new(1.0, 0.0), 0.5, 256).unwrap();
        assert!(matches!(monotone_renormalize(&thin), Err(Error::RenormalizationFailed(_))));
        let c = ProfileCurve::chekanov_pair(PlanarPoint::new(1.0, 0.0), 0.95, 512).unwrap();
        let a = symplectic_area(&disc_region(&c, 0)).unwrap();
        assert!(a < monotone_target(SymmetryClass::Chekanov));
        let (out, l) = monotone_renormalize(&c).unwrap();
        assert!(l > 0.0);
        assert!(monotone_defect(&out).unwrap().defect < 1e-10);
        assert_eq!(cone_index(&out) * 4, cone_intersections(&out, &ConeSpec::symmetric(FRAC_PI_2)).0);
    }

    #[test]
    fn no_neck_far_from_singular() {
        let s = FlowState::new(ProfileCurve::circle(1.0, 256)).unwrap();
        assert!(detect_neck(&s, 5.0, EPS0).is_none());
        let small = FlowState::new(ProfileCurve::circle(0.5, 256)).unwrap();
        assert!(detect_neck(&small, 5.0, EPS0).is_none());
    }

    #[test]
    fn fabricated_neck_on_circle_fails() {
        let c = ProfileCurve::circle(1.0, 256);
        let neck = NeckSpec {
            r: 2.0,
            epsilon: 0.05,
            p_plus: PlanarPoint::polar(1.0, FRAC_PI_4 + 0.05),
            p_minus: PlanarPoint::polar(1.0, -FRAC_PI_4 - 0.05),
            axis_before: Axis::Real,
        };
        assert!(matches!(neck_to_neck(&c, &neck), Err(Error::SurgeryFailed(_))));
    }
}
