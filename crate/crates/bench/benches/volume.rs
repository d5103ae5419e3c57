use criterion::{criterion_group, criterion_main, Criterion};
use monenv_core::oracle::mc_volume;
use monenv_core::{validate, BranchKind, MonomialInstance};
use std::hint::black_box;

fn volume(c: &mut Criterion) {
    let conic_example =
        validate(MonomialInstance::planar([1.7, 1.5], 0.35, 3.0, 0.4, 10.0)).unwrap();
    let concave_example =
        validate(MonomialInstance::planar([0.1, 0.2], 0.4, 3.3, 0.65, 1.21)).unwrap();
    c.bench_function("closed_form_volume", |b| {
        b.iter(|| black_box(&conic_example).closed_form_volume().unwrap())
    });
    c.bench_function("quadrature_volume", |b| {
        b.iter(|| black_box(&concave_example).quadrature_volume().unwrap())
    });
    c.bench_function("mc_volume/1e5", |b| {
        b.iter(|| mc_volume(&conic_example, black_box(7), 100_000).unwrap())
    });
    c.bench_function("balanced_point/ratio", |b| {
        b.iter(|| {
            conic_example
                .balanced_point(BranchKind::Ratio, 1e-8)
                .unwrap()
        })
    });
    c.bench_function("min_volume_branch", |b| {
        b.iter(|| concave_example.min_volume_branch(1e-3, 1e-8).unwrap())
    });
}

criterion_group!(benches, volume);
criterion_main!(benches);
