use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use enlarge_core::estimators::HRecipe;
use enlarge_core::graph::build_zd_box;
use enlarge_core::percolation::{clusters, invasion_levels};
use enlarge_core::properties::{cut_points, effective_resistance};
use enlarge_core::{enlarge, sample_config, Lattice, Topology, Window};

fn bench_clusters(c: &mut Criterion) {
    let mut group = c.benchmark_group("clusters");
    for radius in [32, 64] {
        let g = build_zd_box(2, radius).unwrap();
        let cfg = sample_config(&g, 0.5, 1, &[]).unwrap();
        group.bench_with_input(BenchmarkId::new("z2_box", radius), &radius, |b, _| {
            b.iter(|| clusters(&g, &cfg).cluster_count())
        });
    }
    group.finish();
}

fn bench_invasion(c: &mut Criterion) {
    let w = Window::Lattice(Lattice::new(3, 32).unwrap());
    let o = w.origin();
    let mut seed = 0;
    c.bench_function("invasion/z3_radius_32", |b| {
        b.iter(|| {
            seed += 1;
            invasion_levels(&w, seed, &[o], |v| w.shell(v).unwrap(), 32)
        })
    });
}

fn bench_enlarge(c: &mut Criterion) {
    let w = Window::Lattice(Lattice::new(3, 48).unwrap());
    let h = HRecipe::Trace {
        start: None,
        steps: 20_000,
    }
    .sample(&w, 7)
    .unwrap();
    let cfg = sample_config(&w, 0.1, 8, &[]).unwrap();
    c.bench_function("enlarge/z3_trace", |b| {
        b.iter(|| enlarge(&w, &h, &cfg).vertex_count())
    });

    let w5 = Window::Lattice(Lattice::new(5, 6).unwrap());
    let h5 = HRecipe::TwoSidedTrace {
        start: None,
        steps: 20_000,
    }
    .sample(&w5, 7)
    .unwrap();
    let u5 = enlarge(&w5, &h5, &sample_config(&w5, 0.03, 8, &[]).unwrap());
    c.bench_function("cut_points/z5_two_sided_trace", |b| {
        b.iter(|| cut_points(&w5, &u5, w5.origin(), 3).unwrap().len())
    });
}

fn bench_resistance(c: &mut Criterion) {
    let mut group = c.benchmark_group("resistance");
    // radius 10 is solved densely, radius 24 by conjugate gradients
    for radius in [10, 24] {
        let g = build_zd_box(2, radius).unwrap();
        let sub = g.whole();
        let boundary = g.boundary();
        group.bench_with_input(
            BenchmarkId::new("z2_box_to_boundary", radius),
            &radius,
            |b, _| {
                b.iter(|| {
                    effective_resistance(&sub, g.origin(), &boundary)
                        .unwrap()
                        .value()
                })
            },
        );
    }
    group.finish();
}

criterion_group!(
    kernels,
    bench_clusters,
    bench_invasion,
    bench_enlarge,
    bench_resistance
);
criterion_main!(kernels);
