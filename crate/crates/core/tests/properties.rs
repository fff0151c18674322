use std::f64::consts::PI;

use cp2flow::cg_diagnostics::{cg_residual, monotone_defect};
use cp2flow::cp2_core::{cone_intersections, disc_area, disc_region, symplectic_area};
use cp2flow::curvature_flow::{normal_velocity, step, FlowEvent, EventPayload};
use cp2flow::minimal_family::{first_integral, period, radial_roots};
use cp2flow::scenario::{check_events, ExpectedEvent};
use cp2flow::surgery::monotone_renormalize;
use cp2flow::{ConeSpec, FlowConfig, FlowEventKind, FlowState, PlanarPoint, ProfileCurve, SymmetryClass, CLIFFORD_TARGET};
use proptest::prelude::*;

fn star(r0: f64, a: [f64; 3], n: usize) -> ProfileCurve {
    ProfileCurve::star(move |phi| r0 * (1.0 + a[0] * (2.0 * phi).cos() + a[1] * (4.0 * phi).cos() + a[2] * (6.0 * phi).sin()), n)
}

fn rotated(c: &ProfileCurve, angle: f64) -> ProfileCurve {
    let (s, co) = angle.sin_cos();
    let components = c
        .components
        .iter()
        .map(|comp| comp.iter().map(|p| PlanarPoint::new(co * p.x - s * p.y, s * p.x + co * p.y)).collect())
        .collect();
    ProfileCurve { components, class: c.class }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn circle_area_matches_closed_form(r in 0.05f64..6.0) {
        let a = symplectic_area(&disc_region(&ProfileCurve::circle(r, 1024), 0)).unwrap();
        prop_assert!((a - disc_area(r)).abs() < 1e-8);
        prop_assert!(a > 0.0 && a < PI);
    }

    #[test]
    fn area_is_rotation_invariant(r0 in 0.4f64..2.0, a in prop::array::uniform3(-0.1f64..0.1), angle in 0.0f64..6.3) {
        let c = star(r0, a, 512);
        let a0 = symplectic_area(&disc_region(&c, 0)).unwrap();
        let a1 = symplectic_area(&disc_region(&rotated(&c, angle), 0)).unwrap();
        prop_assert!((a0 - a1).abs() < 1e-9);
    }

    #[test]
    fn cg_identity_on_stars(r0 in 0.4f64..2.0, a in prop::array::uniform3(-0.1f64..0.1)) {
        prop_assert!(cg_residual(&star(r0, a, 1024), 0).unwrap().abs() < 1e-6);
    }

    #[test]
    fn lines_through_origin_do_not_move(angle in 0.0f64..PI, h in 0.01f64..0.2, r_start in 0.05f64..1.0) {
        // a thin closed loop around a ray segment; its long sides are on the line
        let dir = PlanarPoint::polar(1.0, angle);
        let mut pts: Vec<PlanarPoint> = (0..40).map(|i| dir * (r_start + h * i as f64)).collect();
        let normal = dir.perp() * 1e-3;
        pts.extend((0..40).rev().map(|i| dir * (r_start + h * i as f64) + normal));
        let v = &normal_velocity(&ProfileCurve { components: vec![pts], class: SymmetryClass::Clifford }).unwrap()[0];
        for x in &v[2..38] {
            prop_assert!(x.abs() < 1e-8, "{x}");
        }
    }

    #[test]
    fn circles_meet_any_cone_four_times(r in 0.1f64..3.0, opening in 0.05f64..3.0, axis in -1.5f64..1.5) {
        let (n, _) = cone_intersections(&ProfileCurve::circle(r, 257), &ConeSpec::new(axis, opening));
        prop_assert_eq!(n, 4);
    }

    #[test]
    fn renormalization_hits_the_monotone_area(r in 0.3f64..3.0) {
        let (c, lambda) = monotone_renormalize(&ProfileCurve::circle(r, 512)).unwrap();
        prop_assert!((lambda * r - 1.0).abs() < 1e-8);
        prop_assert!(monotone_defect(&c).unwrap().defect < 1e-10);
    }

    #[test]
    fn circles_shrink_or_grow_toward_the_unit_circle(r in 0.3f64..2.5) {
        prop_assume!((r - 1.0).abs() > 1e-3);
        let cfg = FlowConfig { pin_monotone: false, ..FlowConfig::default() };
        let s = step(&FlowState::new(ProfileCurve::circle(r, 128)).unwrap(), &cfg).unwrap();
        let moved = s.curve.max_radius() - r;
        // dr/dt = −v: circles inside the unit circle shrink, outside ones grow
        let v = (1.0 + 2.0 * r * r) * (1.0 - r * r) / r;
        prop_assert!(moved * v <= 0.0, "r={r} moved={moved} v={v}");
        prop_assert!((s.curve.max_radius() - s.curve.min_radius()) < 1e-9);
    }

    #[test]
    fn period_lies_between_its_limits(c in 27.5f64..1e7) {
        let psi = period(c).unwrap();
        prop_assert!(psi > 1.5 * PI && psi < PI * 3f64.sqrt());
        let (r1, r2, _) = radial_roots(c).unwrap();
        prop_assert!(first_integral(r1 * r1, c).abs() < 1e-9 && first_integral(r2 * r2, c).abs() < 1e-9);
    }

    #[test]
    fn a_run_satisfies_its_own_event_list(kinds in prop::collection::vec(0usize..4, 0..8), noise in prop::collection::vec(0usize..3, 0..8)) {
        let milestones = [
            FlowEventKind::SingularityDetected,
            FlowEventKind::SurgeryPerformed,
            FlowEventKind::Converged,
            FlowEventKind::Halted,
        ];
        let diagnostics = [FlowEventKind::ScaleProbeHit, FlowEventKind::GraphicalAttained, FlowEventKind::ConeCountDropped];
        let mut events = vec![];
        for (i, k) in kinds.iter().enumerate() {
            if let Some(n) = noise.get(i) {
                events.push(FlowEvent { kind: diagnostics[*n], t: i as f64, payload: EventPayload::None });
            }
            events.push(FlowEvent { kind: milestones[*k], t: i as f64 + 0.5, payload: EventPayload::None });
        }
        let expected: Vec<ExpectedEvent> = kinds.iter().map(|k| ExpectedEvent { kind: milestones[*k], optional: false }).collect();
        prop_assert!(check_events(&expected, &[], &events).pass);
        if !expected.is_empty() {
            prop_assert!(!check_events(&expected[1..], &[], &events).pass);
        }
    }
}

#[test]
fn monotone_target_is_the_clifford_area() {
    assert!((disc_area(1.0) - CLIFFORD_TARGET).abs() < 1e-15);
}
