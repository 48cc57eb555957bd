use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use nilgamma::chars::gauss_sum;
use nilgamma::explorer::{run_blocks, run_counterexample, BlocksConfig};
use nilgamma::{CompareMode, FqField, GammaContext, InertialSupport, ReductionMap, Ring, RingElem};
use nilgamma_bench::f25_pair;

fn gauss(c: &mut Criterion) {
    let (chi, psi) = f25_pair();
    c.bench_function("gauss_sum F_25", |b| {
        b.iter(|| gauss_sum(black_box(&chi), black_box(&psi)).unwrap())
    });
    c.bench_function("field F_7^4", |b| {
        b.iter(|| FqField::new(black_box(7), 4).unwrap())
    });
}

fn reduction(c: &mut Criterion) {
    let map = ReductionMap::new(120, 2).unwrap();
    let (chi, psi) = f25_pair();
    let tau = gauss_sum(&chi, &psi).unwrap();
    c.bench_function("reduce Gauss sum M=120 l=2", |b| {
        b.iter(|| map.reduce(black_box(&tau)).unwrap())
    });
}

fn gamma(c: &mut Criterion) {
    let ctx = GammaContext::modular(5, 2, 4, 0, CompareMode::UpToMonomial).unwrap();
    let theta = InertialSupport::cuspidal(5, 8).unwrap();
    let r = ctx.ring();
    let chi = ctx.lift_char(0, &r.one().add(&r.y()), r.one()).unwrap();
    c.bench_function("cuspidal gamma q=5 N=4", |b| {
        b.iter(|| {
            ctx.gamma_support(black_box(&theta), black_box(&chi))
                .unwrap()
        })
    });
}

fn explorer(c: &mut Criterion) {
    let mut group = c.benchmark_group("explorer");
    group.sample_size(10);
    group.bench_function("blocks q=5 l=2 N=4", |b| {
        b.iter(|| run_blocks(black_box(&BlocksConfig::default())).unwrap())
    });
    group.bench_function("counterexample", |b| {
        b.iter(|| run_counterexample(black_box(0)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, gauss, reduction, gamma, explorer);
criterion_main!(benches);
