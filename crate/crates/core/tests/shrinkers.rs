use std::f64::consts::{FRAC_1_SQRT_2, PI};

use cp2flow::scenario::{shrink_time_exact, shrinker_timing, Shrinker};
use cp2flow::Error;

#[test]
fn clifford_circles_shrink_on_schedule() {
    for r0 in [0.5, FRAC_1_SQRT_2] {
        let (sim, exact) = shrinker_timing(Shrinker::Clifford { r0 }, 128).unwrap();
        let x = r0 * r0;
        assert!((exact - ((1.0 + 2.0 * x) / (1.0 - x)).ln() / 6.0).abs() < 1e-12);
        assert!((sim - exact).abs() < 0.01 * exact, "r0 = {r0}: {sim} vs {exact}");
    }
}

#[test]
fn chekanov_circle_of_the_construction() {
    // the pocket disc of the two-surgery construction: area π/18
    let (sim, exact) = shrinker_timing(Shrinker::Chekanov { d: FRAC_1_SQRT_2, radius: 0.3258 }, 256).unwrap();
    eprintln!("Chekanov circle: simulated {sim}, exact {exact}");
    assert!((sim - exact).abs() < 0.01 * exact);
}

#[test]
fn monotone_input_never_becomes_singular() {
    assert!(matches!(shrink_time_exact(2.0 * PI / 3.0, 4.0), Err(Error::InfiniteTime)));
    let near = shrink_time_exact(2.0 * PI / 3.0 - 1e-9, 4.0).unwrap();
    assert!(near > 3.0);
    assert!(shrinker_timing(Shrinker::Clifford { r0: 1.0 }, 64).is_err());
}
