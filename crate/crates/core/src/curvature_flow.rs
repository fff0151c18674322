//! Explicit time stepping of the reduced flow
//! ∂γ/∂t = V ν, V = ½(1+2r²)²(k − ((1−4r²)/(1+2r²))⟨γ,ν⟩/r²),
//! with ν the left unit normal, plus remeshing, singularity detection and
//! the trajectory monitors.

use crate::cg_diagnostics::{
    disc_component, fast_disc_area, max_opening_angle, maximal_triangle, monotone_defect, monotone_target,
    neck_triangle,
};
use crate::cp2_core::curve::wrap_angle;
use crate::cp2_core::{
    circle_crossings, cone_intersections, disc_region, symplectic_area, ComponentSpline, ConeSpec, PlanarPoint,
    ProfileCurve, SymmetryClass,
};
use crate::error::{Error, Result};
use crate::numerics::linear_fit;
use crate::surgery::SurgeryRecord;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;

/// Which per-sample diagnostics run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Monitors {
    pub cone_counts: bool,
    pub monotone_defect: bool,
    pub triangle: bool,
}

impl Default for Monitors {
    fn default() -> Self {
        Monitors { cone_counts: true, monotone_defect: true, triangle: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfig {
    pub vertices_per_component: usize,
    pub cfl: f64,
    pub remesh_ratio: f64,
    pub singular_radius: f64,
    pub curvature_resolution_factor: f64,
    pub max_time: f64,
    /// Flow time between trajectory samples. A sample is also taken
    /// whenever min_r has dropped by 10% since the last one.
    pub sample_interval: f64,
    /// Keep the curve of every n-th sample.
    pub snapshot_stride: usize,
    pub converge_speed: f64,
    /// Hold the monotone disc area at its target by homotheties.
    pub pin_monotone: bool,
    pub pin_stride: usize,
    pub max_steps: u64,
    pub monitors: Monitors,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            vertices_per_component: 1024,
            cfl: 0.2,
            remesh_ratio: 2.0,
            singular_radius: 1e-3,
            curvature_resolution_factor: 0.1,
            max_time: 10.0,
            sample_interval: 1e-3,
            snapshot_stride: 25,
            converge_speed: 1e-6,
            pin_monotone: true,
            pin_stride: 4,
            max_steps: 10_000_000,
            monitors: Monitors::default(),
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.remesh_ratio,
            self.singular_radius,
            self.curvature_resolution_factor,
            self.max_time,
            self.sample_interval,
            self.converge_speed,
        ];
        if !(self.cfl > 0.0 && self.cfl <= 0.5) {
            return Err(Error::Config(format!("cfl {} outside (0, 0.5]", self.cfl)));
        }
        if positive.iter().any(|v| !(*v > 0.0)) || self.vertices_per_component < 8 {
            return Err(Error::Config("thresholds must be positive".into()));
        }
        if self.remesh_ratio <= 1.0 || self.snapshot_stride == 0 || self.pin_stride == 0 {
            return Err(Error::Config("remesh_ratio must exceed 1 and strides be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlowEventKind {
    SingularityDetected,
    ScaleProbeHit,
    GraphicalAttained,
    ConeCountDropped,
    SurgeryPerformed,
    Converged,
    Halted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum EventPayload {
    None,
    Singularity(SingularityReport),
    Probe { epsilon: f64, points: Vec<PlanarPoint> },
    Count { before: usize, after: usize },
    Surgery(Box<SurgeryRecord>),
    Converged { max_speed: f64, hausdorff: f64 },
    Halt { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowEvent {
    pub kind: FlowEventKind,
    pub t: f64,
    pub payload: EventPayload,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularityReport {
    pub t_detected: f64,
    pub at_origin: bool,
    pub min_radius: f64,
    pub cone_deviation: f64,
    pub type_one_ratio: f64,
    pub estimated_t: f64,
}

#[derive(Debug, Clone)]
pub struct FlowState {
    pub curve: ProfileCurve,
    pub t: f64,
    pub min_radius: f64,
    pub max_curvature: f64,
    /// max |k|·h over vertices within 0.1 of the origin.
    pub resolution: f64,
    pub step_count: u64,
    pub event_log: Vec<FlowEvent>,
    /// (t, min_r²) at recent samples, for the singular-time estimate.
    pub r2_history: Vec<(f64, f64)>,
    pub pin_target: Option<f64>,
    /// Largest area drift removed by pinning since the last sample.
    pub pin_defect: f64,
    pub remesh_count: u64,
}

const HISTORY: usize = 16;

impl FlowState {
    pub fn new(curve: ProfileCurve) -> Result<Self> {
        curve.validate()?;
        let mut s = FlowState {
            curve,
            t: 0.0,
            min_radius: 0.0,
            max_curvature: 0.0,
            resolution: 0.0,
            step_count: 0,
            event_log: vec![],
            r2_history: vec![],
            pin_target: None,
            pin_defect: 0.0,
            remesh_count: 0,
        };
        s.refresh()?;
        Ok(s)
    }

    fn refresh(&mut self) -> Result<()> {
        self.min_radius = self.curve.min_radius();
        let mut kmax: f64 = 0.0;
        let mut res: f64 = 0.0;
        for c in &self.curve.components {
            let kin = kinematics(c)?;
            for (i, k) in kin.k.iter().enumerate() {
                kmax = kmax.max(k.abs());
                if c[i].r() < 0.1 {
                    res = res.max(k.abs() * kin.h[i]);
                }
            }
        }
        self.max_curvature = kmax;
        self.resolution = res;
        Ok(())
    }

    fn push(&mut self, kind: FlowEventKind, payload: EventPayload) {
        self.event_log.push(FlowEvent { kind, t: self.t, payload });
    }
}

/// Per-vertex geometry of one closed component.
pub(crate) struct Kinematics {
    pub v: Vec<f64>,
    pub nu: Vec<PlanarPoint>,
    pub k: Vec<f64>,
    /// Mean of the two adjacent edge lengths.
    pub h: Vec<f64>,
}

/// Curvature from the circle through each vertex and its neighbours
/// (Menger curvature), normal towards that circle's centre. Both are exact
/// on any inscribed polygon of a round circle, whatever the spacing.
pub(crate) fn kinematics(c: &[PlanarPoint]) -> Result<Kinematics> {
    let n = c.len();
    let mut out = Kinematics { v: vec![0.0; n], nu: vec![PlanarPoint::ORIGIN; n], k: vec![0.0; n], h: vec![0.0; n] };
    for i in 0..n {
        let a = c[(i + n - 1) % n];
        let b = c[i];
        let d = c[(i + 1) % n];
        let r2 = b.r2();
        if r2 < 1e-24 {
            return Err(Error::NearOrigin(i));
        }
        let em = b - a;
        let ep = d - b;
        let (lm, lp, lc) = (em.norm(), ep.norm(), (d - a).norm());
        if lm == 0.0 || lp == 0.0 {
            return Err(Error::DegenerateTangent(i));
        }
        let k = 2.0 * em.cross(ep) / (lm * lp * lc);
        // direction to the circumcentre; perpendicular to the chord when
        // the three points are collinear
        let u = a - b;
        let w = d - b;
        let rot = |p: PlanarPoint| PlanarPoint::new(p.y, -p.x);
        let q = rot(w) * u.r2() - rot(u) * w.r2();
        let left = (d - a).perp();
        let mut nu = q.normalized();
        if nu.dot(left) < 0.0 {
            nu = -nu;
        }
        let s = 1.0 + 2.0 * r2;
        let alpha = (1.0 - 4.0 * r2) / s;
        out.v[i] = 0.5 * s * s * (k - alpha * b.dot(nu) / r2);
        out.nu[i] = nu;
        out.k[i] = k;
        out.h[i] = 0.5 * (lm + lp);
    }
    Ok(out)
}

/// Normal speed V at every vertex, per component.
pub fn normal_velocity(curve: &ProfileCurve) -> Result<Vec<Vec<f64>>> {
    curve.components.iter().map(|c| Ok(kinematics(c)?.v)).collect()
}

/// Edge weights dl/L + dθ/Θ: half the vertices equidistributed in length,
/// half in turning, which keeps a collapsing neck resolved.
pub(crate) fn mesh_weights(c: &[PlanarPoint]) -> Vec<f64> {
    let n = c.len();
    let tau: Vec<f64> = (0..n)
        .map(|i| {
            let em = c[i] - c[(i + n - 1) % n];
            let ep = c[(i + 1) % n] - c[i];
            em.cross(ep).atan2(em.dot(ep)).abs()
        })
        .collect();
    let dl: Vec<f64> = (0..n).map(|i| c[i].dist(c[(i + 1) % n])).collect();
    let mut theta: Vec<f64> = (0..n).map(|i| 0.5 * (tau[i] + tau[(i + 1) % n])).collect();
    // discrete turning is noisy on an uneven mesh; without smoothing the
    // remesh reproduces its own irregularity
    for _ in 0..4 {
        theta = (0..n).map(|i| 0.25 * (theta[(i + n - 1) % n] + 2.0 * theta[i] + theta[(i + 1) % n])).collect();
    }
    let l: f64 = dl.iter().sum();
    let th: f64 = theta.iter().sum::<f64>().max(1e-300);
    (0..n).map(|i| dl[i] / l + theta[i] / th).collect()
}

fn remesh_if_needed(curve: &ProfileCurve, ratio: f64, force: bool) -> Result<Option<ProfileCurve>> {
    let c = &curve.components[0];
    let w = mesh_weights(c);
    let (lo, hi) = w.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(*x), hi.max(*x)));
    if hi <= ratio * lo && !force {
        return Ok(None);
    }
    let dl: Vec<f64> = (0..c.len()).map(|i| c[i].dist(c[(i + 1) % c.len()])).collect();
    let density = move |_: &ComponentSpline, i: usize| w[i] / dl[i].max(1e-300);
    Ok(Some(curve.resampled(c.len(), Some(&density))?))
}

/// Resamples to `n` vertices per component with the flow's length plus
/// turning density.
pub fn adapted_resample(curve: &ProfileCurve, n: usize) -> Result<ProfileCurve> {
    let c = &curve.components[0];
    let w = mesh_weights(c);
    let dl: Vec<f64> = (0..c.len()).map(|i| c[i].dist(c[(i + 1) % c.len()])).collect();
    let density = move |_: &ComponentSpline, i: usize| w[i] / dl[i].max(1e-300);
    curve.resampled(n, Some(&density))
}

/// Result of one explicit step.
#[derive(Debug, Clone, Copy)]
pub struct StepInfo {
    pub dt: f64,
    pub max_speed: f64,
    pub remeshed: bool,
}

fn advance(state: &mut FlowState, config: &FlowConfig) -> Result<StepInfo> {
    let kins: Vec<Kinematics> = state.curve.components.iter().map(|c| kinematics(c)).collect::<Result<_>>()?;
    // parabolic CFL per vertex: the fine edges sit at the neck, where the
    // diffusion coefficient is smallest
    let mut dt = f64::INFINITY;
    let mut max_speed: f64 = 0.0;
    for (c, kin) in state.curve.components.iter().zip(&kins) {
        let n = c.len();
        for i in 0..n {
            let h = c[i].dist(c[(i + 1) % n]).min(c[i].dist(c[(i + n - 1) % n]));
            let s = 1.0 + 2.0 * c[i].r2();
            dt = dt.min(config.cfl * h * h / (0.5 * s * s));
            max_speed = max_speed.max(kin.v[i].abs());
        }
    }
    if !(dt >= 1e-14) {
        return Err(Error::ResolutionExhausted(dt));
    }
    for (c, kin) in state.curve.components.iter_mut().zip(&kins) {
        for i in 0..c.len() {
            c[i] += kin.nu[i] * (kin.v[i] * dt);
        }
    }
    // a neck at half the resolution limit is remeshed early, so the limit
    // itself only trips when the vertex budget is exhausted
    let force = state.resolution > 0.5 * config.curvature_resolution_factor;
    let remeshed = match remesh_if_needed(&state.curve, config.remesh_ratio, force)? {
        Some(c) => {
            state.curve = c;
            state.remesh_count += 1;
            true
        }
        None => {
            state.curve = state.curve.symmetrize()?;
            false
        }
    };
    state.t += dt;
    state.step_count += 1;
    state.refresh()?;
    Ok(StepInfo { dt, max_speed, remeshed })
}

/// One forward-Euler step with remeshing and symmetrization.
pub fn step(state: &FlowState, config: &FlowConfig) -> Result<FlowState> {
    let mut s = state.clone();
    advance(&mut s, config)?;
    Ok(s)
}

/// Restores the monotone disc area by a homothety; returns the drift that
/// was removed.
pub fn pin_area(curve: &mut ProfileCurve, target: f64) -> f64 {
    let k = disc_component(curve);
    let (a, da) = fast_disc_area(&curve.components[k]);
    let lambda = 1.0 + (target - a) / da;
    *curve = curve.scaled(lambda);
    (a - target).abs()
}

/// Maximum angular distance from the lines of C⁰_{π/2}, over vertices in
/// the annulus 3·min_r ≤ r ≤ 10·min_r (the blow-up scale, minus the neck
/// tip itself).
pub fn cone_deviation(curve: &ProfileCurve) -> f64 {
    let m = curve.min_radius();
    let mut worst: f64 = 0.0;
    let mut any = false;
    for p in curve.points() {
        let r = p.r();
        if r >= 3.0 * m && r <= 10.0 * m {
            any = true;
            let x = (p.phi() - FRAC_PI_4).rem_euclid(FRAC_PI_2);
            worst = worst.max(x.min(FRAC_PI_2 - x));
        }
    }
    if any {
        worst
    } else {
        FRAC_PI_4
    }
}

/// Fires on a small minimum radius or an under-resolved neck.
pub fn detect_singularity(state: &FlowState, config: &FlowConfig) -> Option<SingularityReport> {
    if state.min_radius >= config.singular_radius && state.resolution <= config.curvature_resolution_factor {
        return None;
    }
    let mut hist = state.r2_history.clone();
    if hist.last().map_or(true, |h| h.0 < state.t) {
        hist.push((state.t, state.min_radius * state.min_radius));
    }
    let estimated_t = if hist.len() >= 3 {
        let (ts, rs): (Vec<f64>, Vec<f64>) = hist.iter().copied().unzip();
        let (slope, icpt) = linear_fit(&ts, &rs);
        if slope < 0.0 {
            (-icpt / slope).max(state.t)
        } else {
            state.t
        }
    } else {
        state.t
    };
    Some(SingularityReport {
        t_detected: state.t,
        at_origin: state.min_radius < 10.0 * config.singular_radius,
        min_radius: state.min_radius,
        cone_deviation: cone_deviation(&state.curve),
        type_one_ratio: (estimated_t - state.t) * state.max_curvature * state.max_curvature,
        estimated_t,
    })
}

/// Largest ε < ε₀ on a 32-point grid, refined by bisection, for which the
/// curve inside the ball of radius `r` meets C⁰_{π/2+2ε}; with the
/// crossing points inside the ball.
pub fn scale_probe(state: &FlowState, r: f64, eps0: f64) -> Option<(f64, Vec<PlanarPoint>)> {
    let hits = |eps: f64| -> Vec<PlanarPoint> {
        let cone = ConeSpec::symmetric(FRAC_PI_2 + 2.0 * eps);
        cone_intersections(&state.curve, &cone).1.into_iter().map(|c| c.point).filter(|p| p.r() < r).collect()
    };
    let grid: Vec<f64> = (1..=32).map(|j| eps0 * (j as f64 - 0.5) / 32.0).collect();
    let j = grid.iter().rposition(|e| !hits(*e).is_empty())?;
    let (mut lo, mut hi) = (grid[j], if j + 1 < grid.len() { grid[j + 1] } else { eps0 });
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if hits(mid).is_empty() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some((lo, hits(lo)))
}

/// One trajectory sample.
#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub t: f64,
    pub step: u64,
    pub min_r: f64,
    pub max_k: f64,
    pub area_m2: f64,
    pub area_m4: f64,
    pub defect: f64,
    /// Crossings with C⁰_{π/2}, C⁰_{2π/3} and the unit circle.
    pub n_cone: usize,
    pub n_cone_wide: usize,
    pub n_circle: usize,
    pub psi_max: f64,
    pub tri_area: f64,
    pub max_speed: f64,
    #[serde(skip)]
    pub curve: Option<ProfileCurve>,
}

pub const CSV_HEADER: &str = "t,min_r,max_k,area_m2,area_m4,defect,n_cone,psi_max,max_speed";

fn fmt(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.12e}")
    } else {
        "nan".into()
    }
}

pub fn trajectory_csv(samples: &[Sample]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for x in samples {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            fmt(x.t),
            fmt(x.min_r),
            fmt(x.max_k),
            fmt(x.area_m2),
            fmt(x.area_m4),
            fmt(x.defect),
            x.n_cone,
            fmt(x.psi_max),
            fmt(x.max_speed)
        );
    }
    s
}

/// True when φ increases strictly along the single component.
pub fn is_graphical(curve: &ProfileCurve) -> bool {
    if curve.class != SymmetryClass::Clifford {
        return false;
    }
    let c = &curve.components[0];
    (0..c.len()).all(|i| wrap_angle(c[(i + 1) % c.len()].phi() - c[i].phi()) > 0.0)
}

fn take_sample(state: &FlowState, config: &FlowConfig, max_speed: f64, keep_curve: bool) -> Sample {
    let curve = &state.curve;
    let mut s = Sample {
        t: state.t,
        step: state.step_count,
        min_r: state.min_radius,
        max_k: state.max_curvature,
        area_m2: f64::NAN,
        area_m4: f64::NAN,
        defect: f64::NAN,
        n_cone: 0,
        n_cone_wide: 0,
        n_circle: 0,
        psi_max: f64::NAN,
        tri_area: f64::NAN,
        max_speed,
        curve: keep_curve.then(|| curve.clone()),
    };
    if config.monitors.monotone_defect {
        if let Ok(a) = symplectic_area(&disc_region(curve, disc_component(curve))) {
            match curve.class {
                SymmetryClass::Clifford => s.area_m4 = a,
                SymmetryClass::Chekanov => s.area_m2 = a,
            }
            s.defect = match state.pin_target {
                Some(_) => state.pin_defect,
                None => (a - monotone_target(curve.class)).abs(),
            };
        }
    }
    if config.monitors.cone_counts {
        s.n_cone = cone_intersections(curve, &ConeSpec::symmetric(FRAC_PI_2)).0;
        s.n_cone_wide = cone_intersections(curve, &ConeSpec::symmetric(2.0 * PI / 3.0)).0;
        s.n_circle = circle_crossings(curve, 1.0);
    }
    if config.monitors.triangle {
        let tri = match curve.class {
            SymmetryClass::Chekanov => max_opening_angle(curve).and_then(|_| maximal_triangle(curve)),
            SymmetryClass::Clifford => neck_triangle(curve),
        };
        if let Ok(t) = tri {
            s.psi_max = t.psi;
            s.tri_area = t.area;
        }
    }
    s
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub state: FlowState,
    pub trajectory: Vec<Sample>,
    /// Events raised during this run (also appended to the state's log).
    pub events: Vec<FlowEvent>,
    pub singularity: Option<SingularityReport>,
}

impl RunOutput {
    pub fn last_kind(&self) -> Option<FlowEventKind> {
        self.events.last().map(|e| e.kind)
    }
}

/// Steps until max_time, convergence, a detected singularity or a halt.
pub fn run(state: FlowState, config: &FlowConfig) -> Result<RunOutput> {
    config.validate()?;
    let mut state = state;
    let first_event = state.event_log.len();
    if config.pin_monotone && state.pin_target.is_none() {
        if let Ok(d) = monotone_defect(&state.curve) {
            if d.defect < 1e-6 {
                state.pin_target = Some(d.target);
            }
        }
    }
    let mut trajectory = vec![];
    let mut sample_no = 0usize;
    let mut graphical = false;
    let mut last_speed = f64::NAN;
    let mut next_t = state.t;
    let mut last_min_r = f64::INFINITY;
    let mut singularity = None;
    let t_end = state.t + config.max_time;
    loop {
        let due = state.t >= next_t || state.min_radius < 0.9 * last_min_r;
        let report = detect_singularity(&state, config);
        if due || report.is_some() {
            let s = take_sample(&state, config, last_speed, sample_no % config.snapshot_stride == 0 || report.is_some());
            state.pin_defect = 0.0;
            if let Some(prev) = trajectory.last() {
                let prev: &Sample = prev;
                if s.n_cone < prev.n_cone {
                    state.push(FlowEventKind::ConeCountDropped, EventPayload::Count { before: prev.n_cone, after: s.n_cone });
                }
            }
            if !graphical && is_graphical(&state.curve) {
                graphical = true;
                state.push(FlowEventKind::GraphicalAttained, EventPayload::None);
            }
            state.r2_history.push((state.t, state.min_radius * state.min_radius));
            if state.r2_history.len() > HISTORY {
                state.r2_history.remove(0);
            }
            trajectory.push(s);
            sample_no += 1;
            last_min_r = state.min_radius;
            while next_t <= state.t {
                next_t += config.sample_interval;
            }
        }
        if let Some(rep) = detect_singularity(&state, config) {
            state.push(FlowEventKind::SingularityDetected, EventPayload::Singularity(rep));
            singularity = Some(rep);
            break;
        }
        // running out of time is not a failure and leaves no event
        if state.t >= t_end {
            break;
        }
        if state.step_count >= config.max_steps {
            state.push(FlowEventKind::Halted, EventPayload::Halt { reason: "step budget".into() });
            break;
        }
        let info = match advance(&mut state, config) {
            Ok(i) => i,
            Err(e) => {
                state.push(FlowEventKind::Halted, EventPayload::Halt { reason: e.to_string() });
                break;
            }
        };
        last_speed = info.max_speed;
        if let Some(target) = state.pin_target {
            if state.step_count % config.pin_stride as u64 == 0 {
                let d = pin_area(&mut state.curve, target);
                state.pin_defect = state.pin_defect.max(d);
                state.min_radius = state.curve.min_radius();
            }
        }
        if info.max_speed < config.converge_speed {
            let s = take_sample(&state, config, info.max_speed, true);
            trajectory.push(s);
            let hd = state.curve.hausdorff_to_circle(1.0);
            state.push(FlowEventKind::Converged, EventPayload::Converged { max_speed: info.max_speed, hausdorff: hd });
            break;
        }
    }
    if trajectory.last().map_or(true, |s| s.curve.is_none()) {
        let s = take_sample(&state, config, last_speed, true);
        if trajectory.last().map_or(true, |p| p.t < s.t) {
            trajectory.push(s);
        } else if let Some(l) = trajectory.last_mut() {
            l.curve = Some(state.curve.clone());
        }
    }
    let events = state.event_log[first_event..].to_vec();
    Ok(RunOutput { state, trajectory, events, singularity })
}

/// Crossing counts with `cone` along a trajectory, and every increase.
#[derive(Debug, Clone, Default)]
pub struct MonitorResult {
    pub counts: Vec<(f64, usize)>,
    pub increases: Vec<(f64, usize, usize)>,
}

/// Uses the stored counts for C⁰_{π/2} and C⁰_{2π/3}; any other cone is
/// evaluated on the stored snapshots.
pub fn intersection_monitor(trajectory: &[Sample], cone: &ConeSpec) -> MonitorResult {
    let same = |a: f64, b: f64| (a - b).abs() < 1e-12;
    let mut out = MonitorResult::default();
    for s in trajectory {
        let n = if same(cone.axis_angle, 0.0) && same(cone.opening, FRAC_PI_2) {
            Some(s.n_cone)
        } else if same(cone.axis_angle, 0.0) && same(cone.opening, 2.0 * PI / 3.0) {
            Some(s.n_cone_wide)
        } else {
            s.curve.as_ref().map(|c| cone_intersections(c, cone).0)
        };
        if let Some(n) = n {
            if let Some(&(_, prev)) = out.counts.last() {
                if n > prev {
                    out.increases.push((s.t, prev, n));
                }
            }
            out.counts.push((s.t, n));
        }
    }
    out
}

/// Same check for the unit circle.
pub fn circle_monitor(trajectory: &[Sample]) -> MonitorResult {
    let mut out = MonitorResult::default();
    for s in trajectory {
        if let Some(&(_, prev)) = out.counts.last() {
            if s.n_circle > prev {
                out.increases.push((s.t, prev, s.n_circle));
            }
        }
        out.counts.push((s.t, s.n_circle));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rk4;

    #[test]
    fn unit_circle_is_stationary() {
        let v = normal_velocity(&ProfileCurve::circle(1.0, 1024)).unwrap();
        assert!(v[0].iter().all(|x| x.abs() < 1e-10));
        let s = FlowState::new(ProfileCurve::circle(1.0, 256)).unwrap();
        let next = step(&s, &FlowConfig::default()).unwrap();
        assert!(next.curve.hausdorff(&s.curve) < 1e-8);
    }

    #[test]
    fn circle_radial_speed() {
        for r in [0.3f64, 0.7, 1.6] {
            let v = normal_velocity(&ProfileCurve::circle(r, 512)).unwrap();
            let want = (1.0 + 2.0 * r * r) * (1.0 - r * r) / r;
            assert!((v[0][3] - want).abs() < 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn line_through_origin_is_static() {
        let pts: Vec<_> = (1..9).map(|i| PlanarPoint::polar(0.2 * i as f64, 0.7)).collect();
        let kin = kinematics(&pts).unwrap();
        for v in &kin.v[1..7] {
            assert!(v.abs() < 1e-12);
        }
    }

    fn ellipse_error(n: usize) -> f64 {
        let (a, b) = (1.2, 0.8);
        let pts: Vec<_> = (0..n)
            .map(|i| {
                let s = 2.0 * PI * i as f64 / n as f64;
                PlanarPoint::new(a * s.cos(), b * s.sin())
            })
            .collect();
        let v = &normal_velocity(&ProfileCurve { components: vec![pts.clone()], class: SymmetryClass::Clifford })
            .unwrap()[0];
        let mut worst: f64 = 0.0;
        for (i, p) in pts.iter().enumerate() {
            let s = 2.0 * PI * i as f64 / n as f64;
            let d = (a * a * s.sin().powi(2) + b * b * s.cos().powi(2)).sqrt();
            let k = a * b / d.powi(3);
            let g_nu = -a * b / d;
            let r2 = p.r2();
            let q = 1.0 + 2.0 * r2;
            let exact = 0.5 * q * q * (k - (1.0 - 4.0 * r2) / q * g_nu / r2);
            worst = worst.max((v[i] - exact).abs());
        }
        worst
    }

    #[test]
    fn second_order_on_ellipse() {
        let e1 = ellipse_error(256);
        let e2 = ellipse_error(512);
        let ratio = e1 / e2;
        assert!(ratio > 3.5 && ratio < 4.5, "{e1} {e2} {ratio}");
    }

    #[test]
    fn round_circle_follows_ode() {
        let r0 = 0.9;
        let cfg = FlowConfig { max_time: 0.01, pin_monotone: false, ..FlowConfig::default() };
        let out = run(FlowState::new(ProfileCurve::circle(r0, 256)).unwrap(), &cfg).unwrap();
        let t = out.state.t;
        let exact = rk4(|r| -(1.0 + 2.0 * r * r) * (1.0 - r * r) / r, r0, t, 2000);
        let r = out.state.curve.max_radius();
        assert!((r - exact).abs() < 1e-5, "{r} vs {exact}");
        assert!(out.state.curve.max_radius() - out.state.curve.min_radius() < 1e-6);
    }

    #[test]
    fn probe_examples() {
        let s = FlowState::new(ProfileCurve::circle(1.0, 256)).unwrap();
        let (eps, pts) = scale_probe(&s, 2.0, 0.1).unwrap();
        assert!((eps - 0.1).abs() < 1e-6 && !pts.is_empty());
        assert!(scale_probe(&s, 0.5, 0.1).is_none());
        assert!(detect_singularity(&s, &FlowConfig::default()).is_none());
    }

    #[test]
    fn config_validation() {
        assert!(FlowConfig::default().validate().is_ok());
        assert!(FlowConfig { cfl: 0.7, ..FlowConfig::default() }.validate().is_err());
        let parsed: FlowConfig = serde_json::from_str(r#"{"cfl": 0.1}"#).unwrap();
        assert_eq!(parsed.cfl, 0.1);
        assert!(serde_json::from_str::<FlowConfig>(r#"{"bogus": 1}"#).is_err());
    }
}

#[cfg(test)]
mod shrink_tests {
    use super::*;

    #[test]
    fn circle_shrinks_on_schedule() {
        let r0 = std::f64::consts::FRAC_1_SQRT_2;
        let x0 = r0 * r0;
        let exact = ((1.0 + 2.0 * x0) / (1.0 - x0)).ln() / 6.0;
        let out = run(FlowState::new(ProfileCurve::circle(r0, 256)).unwrap(), &FlowConfig::default()).unwrap();
        let rep = out.singularity.expect("singularity");
        eprintln!("{rep:?} exact {exact} steps {}", out.state.step_count);
        assert!((rep.estimated_t - exact).abs() < 0.01 * exact);
        assert!(rep.at_origin);
        assert!((rep.type_one_ratio - 0.5).abs() < 0.05);
    }
}
