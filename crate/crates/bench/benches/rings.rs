use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use floer_core::adjunct::sweep;
use floer_core::floer::{build_floer, split_atlas, verify_gr_structure, PerturbationProfile};
use floer_core::grcompare::{compare, profile_floer, profile_sympow};
use floer_core::sympow::macdonald_ideal;

fn floer(c: &mut Criterion) {
    let mut group = c.benchmark_group("floer");
    group.sample_size(10).measurement_time(Duration::from_secs(10));
    for g in [3u32, 4, 5] {
        group.bench_with_input(BenchmarkId::new("build_t0", g), &g, |b, &g| {
            b.iter(|| build_floer(black_box(g), None, None).unwrap())
        });
        let ring = build_floer(g, None, None).unwrap();
        group.bench_with_input(BenchmarkId::new("split_t0", g), &ring, |b, ring| {
            b.iter(|| split_atlas(black_box(ring.clone())).unwrap())
        });
    }
    for g in [3u32, 4] {
        let p = PerturbationProfile::seeded(g, 4, 7, 0);
        group.bench_with_input(BenchmarkId::new("build_split_n4", g), &p, |b, p| {
            b.iter(|| split_atlas(build_floer(g, Some(4), Some(black_box(p))).unwrap()).unwrap())
        });
        let a = split_atlas(build_floer(g, Some(4), Some(&p)).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::new("graded_n4", g), &a, |b, a| b.iter(|| verify_gr_structure(black_box(a)).unwrap()));
    }
    group.finish();
}

fn sympow(c: &mut Criterion) {
    let mut group = c.benchmark_group("sympow");
    group.sample_size(10);
    for (g, d) in [(3u32, 2u32), (4, 3), (5, 4)] {
        group.bench_with_input(BenchmarkId::new("macdonald", format!("g{g}_d{d}")), &(g, d), |b, &(g, d)| {
            b.iter(|| macdonald_ideal(black_box(g), d).unwrap())
        });
    }
    group.finish();
}

fn hom_symm(c: &mut Criterion) {
    let mut group = c.benchmark_group("hom_symm");
    group.sample_size(10);
    let a = split_atlas(build_floer(4, None, None).unwrap()).unwrap();
    group.bench_function("g4_r0", |b| {
        b.iter(|| {
            let p = profile_floer(&a, 0).unwrap();
            let q = profile_sympow(&macdonald_ideal(4, 3).unwrap()).unwrap();
            assert!(compare(&p, &q).equal);
        })
    });
    group.finish();
}

fn adjunction(c: &mut Criterion) {
    c.bench_function("adjunction_sweep", |b| b.iter(|| assert!(sweep(black_box(6), 6, 10).pass())));
}

criterion_group!(benches, floer, sympow, hom_symm, adjunction);
criterion_main!(benches);
