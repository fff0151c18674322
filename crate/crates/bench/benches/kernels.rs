use cp2flow::cg_diagnostics::cg_residual;
use cp2flow::cp2_core::{cone_intersections, disc_region, symplectic_area};
use cp2flow::curvature_flow::{adapted_resample, normal_velocity, step};
use cp2flow::minimal_family::{catalog, find_closed, period};
use cp2flow::{ConeSpec, FlowConfig, FlowState, ProfileCurve};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn ellipse(n: usize) -> ProfileCurve {
    ProfileCurve::star(|phi| 1.0 / ((phi.cos() / 1.3).powi(2) + (phi.sin() / 0.8).powi(2)).sqrt(), n)
}

fn geometry(c: &mut Criterion) {
    let mut g = c.benchmark_group("geometry");
    for n in [256usize, 1024, 4096] {
        let curve = ellipse(n);
        g.bench_with_input(BenchmarkId::new("normal_velocity", n), &curve, |b, c| b.iter(|| normal_velocity(black_box(c))));
        g.bench_with_input(BenchmarkId::new("symplectic_area", n), &curve, |b, c| {
            b.iter(|| symplectic_area(&disc_region(black_box(c), 0)))
        });
        g.bench_with_input(BenchmarkId::new("cg_residual", n), &curve, |b, c| b.iter(|| cg_residual(black_box(c), 0)));
        g.bench_with_input(BenchmarkId::new("cone_intersections", n), &curve, |b, c| {
            b.iter(|| cone_intersections(black_box(c), &ConeSpec::symmetric(std::f64::consts::FRAC_PI_2)))
        });
    }
    g.finish();
}

fn flow(c: &mut Criterion) {
    let mut g = c.benchmark_group("flow");
    let cfg = FlowConfig::default();
    for n in [256usize, 1024] {
        let state = FlowState::new(ellipse(n)).unwrap();
        g.bench_with_input(BenchmarkId::new("step", n), &state, |b, s| b.iter(|| step(black_box(s), &cfg)));
        let curve = ellipse(n);
        g.bench_with_input(BenchmarkId::new("adapted_resample", n), &curve, |b, c| b.iter(|| adapted_resample(black_box(c), n)));
    }
    g.finish();
}

fn minimal(c: &mut Criterion) {
    let mut g = c.benchmark_group("minimal_family");
    g.bench_function("period_1e6", |b| b.iter(|| period(black_box(1e6))));
    g.bench_function("find_closed_5_4", |b| b.iter(|| find_closed(5, 4, 1e6, 400)));
    g.sample_size(10);
    g.bench_function("catalog_m40", |b| b.iter(|| catalog(40, 1e6)));
    g.finish();
}

criterion_group!(benches, geometry, flow, minimal);
criterion_main!(benches);
