//! Scenario library: initial-curve generators, scripted runs with expected
//! event sequences, shrink-time oracles, persistence and SVG rendering.

pub mod construction;
mod svg;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cg_diagnostics::fast_disc_area;
use crate::cp2_core::{disc_area, ConeSpec, PlanarPoint, ProfileCurve, SymmetryClass};
use crate::curvature_flow::{
    adapted_resample, intersection_monitor, circle_monitor, is_graphical, normal_velocity, run, step, trajectory_csv,
    FlowConfig, FlowEvent, FlowEventKind, FlowState, Sample,
};
use crate::error::{Error, Result};
use crate::minimal_family::{find_closed, synthesize_profile};
use crate::numerics::{bisect, linear_fit};
use crate::surgery::{flow_with_surgery, monotone_renormalize, SurgeryRecord};

pub use construction::{radius_threshold, two_surgery_curve, SelfCheck, TwoSurgeryCurve, TwoSurgeryParams};
pub use svg::{render_svg, Decoration};

/// Initial-curve generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCurve {
    RoundCircle {
        r: f64,
    },
    /// Axis-aligned ellipse, optionally scaled to the monotone area.
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        monotone: bool,
    },
    /// Two round circles about ±center, optionally scaled to the monotone
    /// area (only reachable for circles that nearly touch the origin).
    ChekanovPair {
        center: [f64; 2],
        radius: f64,
        #[serde(default)]
        monotone: bool,
    },
    /// Monotone Chekanov pair whose right component is a superellipse in
    /// (log r, φ): log r = f0 + a·|cos θ|^p, φ = b·|sin θ|^p (signed powers),
    /// with f0 solved for the monotone area.
    MonotoneChekanov {
        a: f64,
        b: f64,
        exponent: f64,
    },
    /// Star curve r = exp(Σ a_j cos 2jφ) scaled to the monotone area.
    /// `jitter` adds seeded uniform noise of that size to each amplitude.
    PerturbedClifford {
        amplitudes: Vec<f64>,
        #[serde(default)]
        jitter: f64,
    },
    TwoSurgeryConstruction(TwoSurgeryParams),
    /// Closed minimal profile, either from the constant C over m periods or
    /// as the first solution of m ψ_C = 2πk.
    MinimalProfile {
        #[serde(default)]
        c: Option<f64>,
        m: u32,
        #[serde(default)]
        k: Option<u32>,
    },
}

/// How a scenario drives the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Smooth flow only; stops at the first singularity.
    Flow,
    FlowWithSurgery,
    /// No flow: the curve is checked and rendered.
    Static,
}

/// An expected event; optional ones (written `Kind?`) may be absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ExpectedEvent {
    pub kind: FlowEventKind,
    pub optional: bool,
}

impl TryFrom<String> for ExpectedEvent {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        let (name, optional) = match s.strip_suffix('?') {
            Some(n) => (n, true),
            None => (s.as_str(), false),
        };
        let kind = serde_json::from_value(serde_json::Value::String(name.into()))
            .map_err(|_| format!("unknown event kind {name:?}"))?;
        Ok(ExpectedEvent { kind, optional })
    }
}

impl From<ExpectedEvent> for String {
    fn from(e: ExpectedEvent) -> String {
        format!("{:?}{}", e.kind, if e.optional { "?" } else { "" })
    }
}

/// The first event of `kind` must come strictly before `before`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Deadline {
    pub kind: FlowEventKind,
    pub before: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    pub initial_curve: InitialCurve,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default)]
    pub config: FlowConfig,
    /// Compared against the milestone events plus the kinds listed here.
    #[serde(default)]
    pub expected_events: Vec<ExpectedEvent>,
    #[serde(default)]
    pub deadlines: Vec<Deadline>,
    /// Cones drawn on the SVG frames, by opening angle.
    #[serde(default = "default_cones")]
    pub cones: Vec<f64>,
}

fn default_mode() -> Mode {
    Mode::FlowWithSurgery
}

fn default_cones() -> Vec<f64> {
    vec![FRAC_PI_2]
}

impl ScenarioSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ScenarioSpec = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.config.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// SHA-256 of the compact JSON form.
    pub fn config_hash(&self) -> String {
        let digest = Sha256::digest(serde_json::to_string(self).expect("spec serializes").as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn expect(kinds: &[&str]) -> Vec<ExpectedEvent> {
    kinds.iter().map(|k| ExpectedEvent::try_from(k.to_string()).expect("builtin event name")).collect()
}

/// The (1/6)log(6/5) bound on the first singular time of the construction.
pub fn two_surgery_deadline() -> f64 {
    (6.0f64 / 5.0).ln() / 6.0
}

/// Names of the built-in scenarios, in catalog order.
pub const BUILTIN: [&str; 7] = [
    "unit_circle",
    "round_circle_shrink",
    "monotone_ellipse",
    "graphical_clifford",
    "chekanov_collapse",
    "two_surgery",
    "minimal_5_4",
];

pub fn builtin(name: &str) -> Option<ScenarioSpec> {
    let base = |initial_curve, mode, config, events: &[&str]| ScenarioSpec {
        name: name.into(),
        initial_curve,
        mode,
        config,
        expected_events: expect(events),
        deadlines: vec![],
        cones: default_cones(),
    };
    let cfg = |n: usize, max_time: f64| FlowConfig { vertices_per_component: n, max_time, ..FlowConfig::default() };
    let spec = match name {
        "unit_circle" => base(InitialCurve::RoundCircle { r: 1.0 }, Mode::FlowWithSurgery, cfg(256, 0.1), &["Converged"]),
        "round_circle_shrink" => base(
            InitialCurve::RoundCircle { r: FRAC_1_SQRT_2 },
            Mode::Flow,
            FlowConfig { pin_monotone: false, ..cfg(256, 1.0) },
            &["SingularityDetected"],
        ),
        "monotone_ellipse" => base(
            InitialCurve::Ellipse { a: 1.3, b: 0.8, monotone: true },
            Mode::FlowWithSurgery,
            cfg(256, 10.0),
            &["Converged"],
        ),
        "graphical_clifford" => base(
            InitialCurve::PerturbedClifford { amplitudes: vec![0.15, -0.06, 0.03], jitter: 0.02 },
            Mode::FlowWithSurgery,
            cfg(512, 10.0),
            &["GraphicalAttained?", "Converged"],
        ),
        "chekanov_collapse" => base(
            InitialCurve::MonotoneChekanov { a: 1.2, b: 1.45, exponent: 0.5 },
            Mode::FlowWithSurgery,
            cfg(512, 10.0),
            &["SingularityDetected", "SurgeryPerformed", "GraphicalAttained?", "Converged"],
        ),
        "two_surgery" => {
            let mut s = base(
                InitialCurve::TwoSurgeryConstruction(TwoSurgeryParams::default()),
                Mode::FlowWithSurgery,
                cfg(1024, 10.0),
                &[
                    "SingularityDetected",
                    "SurgeryPerformed",
                    "SingularityDetected",
                    "SurgeryPerformed",
                    "GraphicalAttained?",
                    "Converged",
                ],
            );
            s.deadlines = vec![Deadline { kind: FlowEventKind::SingularityDetected, before: two_surgery_deadline() }];
            s.cones = vec![FRAC_PI_2, 2.0 * PI / 3.0];
            s
        }
        "minimal_5_4" => base(InitialCurve::MinimalProfile { c: None, m: 5, k: Some(4) }, Mode::Static, cfg(64_000, 1.0), &[]),
        _ => return None,
    };
    Some(spec)
}

fn sgn_pow(x: f64, p: f64) -> f64 {
    x.signum() * x.abs().powf(p)
}

fn superellipse(f0: f64, a: f64, b: f64, p: f64, n: usize) -> ProfileCurve {
    let pts = (0..n)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / n as f64;
            PlanarPoint::polar((f0 + a * sgn_pow(th.cos(), p)).exp(), b * sgn_pow(th.sin(), p))
        })
        .collect();
    ProfileCurve::chekanov_from(pts)
}

fn renormalized(curve: ProfileCurve) -> Result<ProfileCurve> {
    monotone_renormalize(&curve)
        .map(|(c, _)| c)
        .map_err(|e| Error::Generator(format!("monotone target unreachable: {e}")))
}

/// An initial curve and, for the construction, its self-check report.
#[derive(Debug, Clone)]
pub struct Generated {
    pub curve: ProfileCurve,
    pub construction: Option<TwoSurgeryCurve>,
}

/// Builds the initial curve of a generator with `n` vertices per component.
/// `seed` drives the jitter of perturbed curves.
pub fn generate_curve(initial: &InitialCurve, n: usize, seed: u64) -> Result<Generated> {
    let dense = 4 * n;
    let plain = |curve| Ok(Generated { curve, construction: None });
    match initial {
        &InitialCurve::RoundCircle { r } => {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Generator("radius must be positive".into()));
            }
            plain(ProfileCurve::circle(r, n))
        }
        &InitialCurve::Ellipse { a, b, monotone } => {
            if !(a > 0.0 && b > 0.0) {
                return Err(Error::Generator("semi-axes must be positive".into()));
            }
            let c = ProfileCurve::star(|t| a * b / ((b * t.cos()).powi(2) + (a * t.sin()).powi(2)).sqrt(), dense)
                .resampled(n, None)?;
            plain(if monotone { renormalized(c)? } else { c })
        }
        &InitialCurve::ChekanovPair { center, radius, monotone } => {
            let c = ProfileCurve::chekanov_pair(PlanarPoint::new(center[0], center[1]), radius, n)
                .map_err(|e| Error::Generator(e.to_string()))?;
            plain(if monotone { renormalized(c)? } else { c })
        }
        &InitialCurve::MonotoneChekanov { a, b, exponent } => {
            if !(b > 0.0 && b < FRAC_PI_2 && a > 0.0 && exponent > 0.0) {
                return Err(Error::Generator("need a > 0, 0 < b < π/2 and a positive exponent".into()));
            }
            let target = crate::CHEKANOV_TARGET;
            let area = |f0: f64| fast_disc_area(&superellipse(f0, a, b, exponent, 2048).components[0]).0 - target;
            // the area rises and then falls with f0; take the first crossing
            let mut lo = -6.0;
            while area(lo) > 0.0 || area(lo + 0.05) < 0.0 {
                lo += 0.05;
                if lo > 2.0 {
                    return Err(Error::Generator("superellipse never reaches the monotone area".into()));
                }
            }
            let f0 = bisect(area, lo, lo + 0.05, 1e-14)?;
            plain(superellipse(f0, a, b, exponent, dense).resampled(n, None)?)
        }
        InitialCurve::PerturbedClifford { amplitudes, jitter } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let amps: Vec<f64> =
                amplitudes.iter().map(|a| a + if *jitter > 0.0 { rng.gen_range(-jitter..*jitter) } else { 0.0 }).collect();
            let rho = |t: f64| amps.iter().enumerate().map(|(j, a)| a * (2.0 * (j + 1) as f64 * t).cos()).sum::<f64>().exp();
            let c = renormalized(ProfileCurve::star(rho, dense).resampled(n, None)?)?;
            if !is_graphical(&c) {
                return Err(Error::Generator("perturbation is not graphical over the circle".into()));
            }
            plain(c)
        }
        InitialCurve::TwoSurgeryConstruction(params) => {
            let built = two_surgery_curve(params)?;
            let curve = adapted_resample(&built.curve, n)?;
            Ok(Generated { curve, construction: Some(built) })
        }
        &InitialCurve::MinimalProfile { c, m, k } => {
            let per = (n / m.max(1) as usize).max(16);
            let curve = match (c, k) {
                (Some(c), _) => synthesize_profile(c, per, m as usize)?,
                (None, Some(k)) => {
                    find_closed(m, k, 1e6, per)?
                        .ok_or_else(|| Error::Generator(format!("no closed minimal profile for ({m}, {k})")))?
                        .profile
                }
                (None, None) => return Err(Error::Generator("minimal profile needs C or k".into())),
            };
            plain(curve)
        }
    }
}

/// Outcome of comparing actual and expected events.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventCheck {
    pub pass: bool,
    pub expected: Vec<ExpectedEvent>,
    /// Actual milestone events plus any other kinds the contract names.
    pub actual: Vec<(FlowEventKind, f64)>,
    pub report: String,
}

fn matches(exp: &[ExpectedEvent], act: &[FlowEventKind]) -> bool {
    match (exp.split_first(), act.split_first()) {
        (None, _) => act.is_empty(),
        (Some((e, rest)), _) if e.optional => {
            matches(rest, act) || act.first().is_some_and(|a| *a == e.kind && matches(rest, &act[1..]))
        }
        (Some(_), None) => false,
        (Some((e, rest)), Some((a, more))) => e.kind == *a && matches(rest, more),
    }
}

/// Kinds that always take part in the event contract; the diagnostic
/// kinds only count when the contract names them.
pub const MILESTONES: [FlowEventKind; 4] = [
    FlowEventKind::SingularityDetected,
    FlowEventKind::SurgeryPerformed,
    FlowEventKind::Converged,
    FlowEventKind::Halted,
];

/// Checks the ordered event contract and the deadlines.
pub fn check_events(expected: &[ExpectedEvent], deadlines: &[Deadline], events: &[FlowEvent]) -> EventCheck {
    let mut kinds: Vec<FlowEventKind> = MILESTONES.to_vec();
    kinds.extend(expected.iter().map(|e| e.kind));
    let actual: Vec<(FlowEventKind, f64)> =
        events.iter().filter(|e| kinds.contains(&e.kind)).map(|e| (e.kind, e.t)).collect();
    let seq: Vec<FlowEventKind> = actual.iter().map(|a| a.0).collect();
    let mut pass = matches(expected, &seq);
    let mut report = String::new();
    if !pass {
        let exp: Vec<String> = expected.iter().map(|e| String::from(*e)).collect();
        report.push_str(&format!("expected [{}]\n  actual [{}]\n", exp.join(", "), fmt_kinds(&seq)));
    }
    for d in deadlines {
        match events.iter().find(|e| e.kind == d.kind) {
            Some(e) if e.t < d.before => {}
            Some(e) => {
                pass = false;
                report.push_str(&format!("{:?} at t = {} is not before {}\n", d.kind, e.t, d.before));
            }
            None => {
                pass = false;
                report.push_str(&format!("{:?} never happened (deadline {})\n", d.kind, d.before));
            }
        }
    }
    EventCheck { pass, expected: expected.to_vec(), actual, report }
}

fn fmt_kinds(k: &[FlowEventKind]) -> String {
    k.iter().map(|k| format!("{k:?}")).collect::<Vec<_>>().join(", ")
}

/// Sturm-type counts that increased between consecutive samples of one
/// smooth segment.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SturmReport {
    pub cone_right: usize,
    pub cone_wide: usize,
    pub unit_circle: usize,
    pub samples: usize,
}

impl SturmReport {
    pub fn monotone(&self) -> bool {
        self.cone_right + self.cone_wide + self.unit_circle == 0
    }
}

pub fn sturm_report(segments: &[Vec<Sample>]) -> SturmReport {
    let mut r = SturmReport::default();
    for seg in segments {
        r.cone_right += intersection_monitor(seg, &ConeSpec::symmetric(FRAC_PI_2)).increases.len();
        r.cone_wide += intersection_monitor(seg, &ConeSpec::symmetric(2.0 * PI / 3.0)).increases.len();
        r.unit_circle += circle_monitor(seg).increases.len();
        r.samples += seg.len();
    }
    r
}

/// Record of one scenario execution.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub scenario: String,
    pub config_hash: String,
    pub seed: u64,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub wall_seconds: f64,
    pub outputs: Vec<PathBuf>,
    pub terminal_event: Option<FlowEventKind>,
    pub final_time: f64,
    pub steps: u64,
    pub events: Vec<FlowEvent>,
    pub surgeries: Vec<SurgeryRecord>,
    pub event_check: EventCheck,
    pub self_checks: Vec<SelfCheck>,
    pub sturm: SturmReport,
    /// Hausdorff distance of the final curve to the unit circle.
    pub final_hausdorff: f64,
    /// Static scenarios: max |V| on the curve.
    pub max_speed: Option<f64>,
    #[serde(skip)]
    pub segments: Vec<Vec<Sample>>,
    #[serde(skip)]
    pub initial: Option<ProfileCurve>,
    #[serde(skip)]
    pub final_curve: Option<ProfileCurve>,
}

impl RunManifest {
    /// All contract checks and generator self-checks passed and the run
    /// did not halt.
    pub fn success(&self) -> bool {
        self.event_check.pass && self.self_checks_pass() && !self.halted()
    }

    pub fn self_checks_pass(&self) -> bool {
        self.self_checks.iter().all(|c| c.pass)
    }

    pub fn halted(&self) -> bool {
        self.terminal_event == Some(FlowEventKind::Halted)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

impl fmt::Display for RunManifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {} ({})", self.scenario, &self.config_hash[..12])?;
        for e in &self.events {
            writeln!(f, "  t = {:<12.6} {:?}", e.t, e.kind)?;
        }
        for c in self.self_checks.iter().filter(|c| !c.pass) {
            writeln!(f, "  self-check failed: {} = {} (target {})", c.name, c.value, c.target)?;
        }
        if !self.event_check.pass {
            write!(f, "  event assertion failed:\n  {}", self.event_check.report)?;
        }
        write!(f, "  {} steps, t = {:.6}, {:.1} s", self.steps, self.final_time, self.wall_seconds)
    }
}

fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

/// Generates, flows and checks a scenario; writes the artifacts into `out`
/// when given. Generator self-checks are recorded before the flow starts.
pub fn run_scenario(spec: &ScenarioSpec, seed: u64, out: Option<&Path>) -> Result<RunManifest> {
    spec.config.validate()?;
    let started_unix = unix_now();
    let clock = Instant::now();
    let generated = generate_curve(&spec.initial_curve, spec.config.vertices_per_component, seed)?;
    let self_checks = generated.construction.as_ref().map(|c| c.checks.clone()).unwrap_or_default();
    let initial = generated.curve.clone();

    let (state, segments, events, surgeries, max_speed) = match spec.mode {
        Mode::Static => {
            let v = normal_velocity(&initial)?;
            let speed = v.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
            (FlowState::new(initial.clone())?, vec![], vec![], vec![], Some(speed))
        }
        Mode::Flow => {
            let o = run(FlowState::new(initial.clone())?, &spec.config)?;
            (o.state, vec![o.trajectory], o.events, vec![], None)
        }
        Mode::FlowWithSurgery => {
            let o = flow_with_surgery(FlowState::new(initial.clone())?, &spec.config)?;
            (o.state, o.segments, o.events, o.records, None)
        }
    };
    let event_check = check_events(&spec.expected_events, &spec.deadlines, &events);
    let final_hausdorff = if state.curve.class == SymmetryClass::Clifford {
        state.curve.hausdorff_to_circle(1.0)
    } else {
        f64::NAN
    };
    let mut manifest = RunManifest {
        scenario: spec.name.clone(),
        config_hash: spec.config_hash(),
        seed,
        started_unix,
        finished_unix: 0.0,
        wall_seconds: 0.0,
        outputs: vec![],
        terminal_event: events.last().map(|e| e.kind),
        final_time: state.t,
        steps: state.step_count,
        sturm: sturm_report(&segments),
        events,
        surgeries,
        event_check,
        self_checks,
        final_hausdorff,
        max_speed,
        segments,
        initial: Some(initial),
        final_curve: Some(state.curve),
    };
    if let Some(dir) = out {
        manifest.outputs = write_artifacts(spec, &manifest, generated.construction.as_ref(), dir)?;
    }
    manifest.wall_seconds = clock.elapsed().as_secs_f64();
    manifest.finished_unix = unix_now();
    if let Some(dir) = out {
        let path = dir.join("manifest.json");
        std::fs::write(&path, manifest.to_json())?;
    }
    Ok(manifest)
}

fn frame_decorations(spec: &ScenarioSpec) -> Vec<Decoration> {
    let mut d: Vec<Decoration> = spec.cones.iter().map(|&a| Decoration::Cone(ConeSpec::symmetric(a))).collect();
    d.push(Decoration::Circle { center: PlanarPoint::ORIGIN, radius: 1.0 });
    d
}

/// Trajectory CSV, curve snapshots, surgery log and SVG frames. Everything
/// written here depends only on the spec and the seed.
fn write_artifacts(
    spec: &ScenarioSpec,
    m: &RunManifest,
    construction: Option<&TwoSurgeryCurve>,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = vec![];
    let mut put = |name: &str, body: String| -> Result<()> {
        let p = dir.join(name);
        std::fs::write(&p, body)?;
        written.push(p);
        Ok(())
    };
    put("spec.json", spec.to_json())?;
    let all: Vec<Sample> = m.segments.iter().flatten().cloned().collect();
    put("trajectory.csv", trajectory_csv(&all))?;

    let mut snaps: Vec<(f64, &ProfileCurve)> = vec![];
    if let Some(c) = &m.initial {
        snaps.push((0.0, c));
    }
    for s in &all {
        if let Some(c) = &s.curve {
            // the first sample repeats the initial curve
            if s.t > 0.0 {
                snaps.push((s.t, c));
            }
        }
    }
    if let Some(c) = &m.final_curve {
        if snaps.last().map_or(true, |l| l.0 < m.final_time) {
            snaps.push((m.final_time, c));
        }
    }
    let docs: Vec<String> = snaps.iter().map(|(t, c)| format!("{{\"t\":{t},\"curve\":{}}}", c.to_json())).collect();
    put("curves.json", format!("[{}]\n", docs.join(",\n")))?;

    let log: String = m.surgeries.iter().map(|r| r.to_json_line() + "\n").collect();
    put("surgery_log.jsonl", log)?;

    if let Some(c) = construction {
        put("construction.json", serde_json::to_string_pretty(c)?)?;
    }

    let deco = frame_decorations(spec);
    for (i, (t, c)) in snaps.iter().enumerate() {
        let mut d = deco.clone();
        if i == 0 {
            if let Some(k) = construction {
                let disc = k.pocket_r;
                d.push(Decoration::Disc { center: PlanarPoint::new(disc.center[0], disc.center[1]), radius: disc.radius });
            }
        }
        put(&format!("frame_{i:04}_{t:.6}.svg"), render_svg(&[*c], &d))?;
    }
    Ok(written)
}

/// Maslov class of a round shrinking circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shrinker {
    /// Circle of radius r0 about the origin (Maslov 4).
    Clifford { r0: f64 },
    /// Chekanov pair of round circles of radius `radius` about ±(d, 0)
    /// (Maslov 2); A is the per-component area.
    Chekanov { d: f64, radius: f64 },
}

/// Extinction time from the linear area ODE dA/dt = 6A − πμ, for area A of
/// a disc of Maslov index μ.
pub fn shrink_time_exact(area: f64, mu: f64) -> Result<f64> {
    let target = PI * mu / 6.0;
    if area >= target * (1.0 - 1e-12) {
        return Err(Error::InfiniteTime);
    }
    Ok((target / (target - area)).ln() / 6.0)
}

/// Exact and simulated extinction times. The simulation follows the area
/// until it drops below a thousandth of its start value and extrapolates
/// the last stretch linearly to zero.
pub fn shrinker_timing(s: Shrinker, n: usize) -> Result<(f64, f64)> {
    let (curve, area, mu) = match s {
        Shrinker::Clifford { r0 } => (ProfileCurve::circle(r0, n), disc_area(r0), 4.0),
        Shrinker::Chekanov { d, radius } => {
            let c = ProfileCurve::chekanov_pair(PlanarPoint::new(d, 0.0), radius, n)?;
            let a = fast_disc_area(&c.components[0]).0;
            (c, a, 2.0)
        }
    };
    let exact = shrink_time_exact(area, mu)?;
    let config = FlowConfig { vertices_per_component: n, pin_monotone: false, ..FlowConfig::default() };
    let comp = if curve.class == SymmetryClass::Clifford { 0 } else { crate::cg_diagnostics::disc_component(&curve) };
    let mut state = FlowState::new(curve)?;
    let mut hist: Vec<(f64, f64)> = vec![];
    loop {
        let a = fast_disc_area(&state.curve.components[comp]).0.abs();
        hist.push((state.t, a));
        if a < 1e-3 * area || state.t > 10.0 * exact {
            break;
        }
        match step(&state, &config) {
            Ok(next) => state = next,
            Err(_) => break,
        }
    }
    let tail = &hist[hist.len().saturating_sub(hist.len() / 20 + 3)..];
    let (ts, xs): (Vec<f64>, Vec<f64>) = tail.iter().copied().unzip();
    let (slope, icpt) = linear_fit(&ts, &xs);
    if !(slope < 0.0) {
        return Err(Error::RootFailure("area did not decrease".into()));
    }
    Ok((-icpt / slope, exact))
}
