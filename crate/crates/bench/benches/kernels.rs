use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tangle3_bench::{pure_states, rank2_states, two_qubit_mixtures, two_qubit_rank2};
use tangle3_core::ckw::wootters_concurrence;
use tangle3_core::family::ghz_w_rank2;
use tangle3_core::measures::{concurrence_pure, monogamy_residual, three_tangle};
use tangle3_core::roof::{minimize_roof, minimize_roof_by, Objective, RoofConfig};
use tangle3_core::zero::has_vanishing_tangle;
use tangle3_core::Qubit;

fn pure_measures(c: &mut Criterion) {
    let states = pure_states(64);
    c.bench_function("three_tangle/64", |b| {
        b.iter(|| states.iter().map(|s| three_tangle(black_box(s))).sum::<f64>())
    });
    c.bench_function("monogamy_residual/64", |b| {
        b.iter(|| states.iter().map(|s| monogamy_residual(black_box(s), Qubit::A)).sum::<f64>())
    });
}

fn wootters(c: &mut Criterion) {
    let rhos = two_qubit_mixtures(64);
    c.bench_function("wootters_concurrence/64", |b| {
        b.iter(|| rhos.iter().map(|r| wootters_concurrence(black_box(r)).unwrap()).sum::<f64>())
    });
}

fn zero_test(c: &mut Criterion) {
    let states = rank2_states(32);
    c.bench_function("has_vanishing_tangle/32", |b| {
        b.iter(|| states.iter().filter(|s| has_vanishing_tangle(black_box(s)).unwrap().vanishes).count())
    });
}

fn roof(c: &mut Criterion) {
    let mut g = c.benchmark_group("minimize_roof");
    g.sample_size(10);
    let cfg = RoofConfig {
        restarts: 8,
        ..RoofConfig::default()
    };
    for p in [0.5, 0.9] {
        let st = ghz_w_rank2(p).unwrap();
        g.bench_with_input(BenchmarkId::new("tau3_family", p), &st, |b, st| {
            b.iter(|| minimize_roof(black_box(st), Objective::Tau3, &cfg).unwrap().value)
        });
    }
    let two = two_qubit_rank2(1).remove(0);
    g.bench_function("two_qubit_concurrence", |b| {
        b.iter(|| minimize_roof_by(black_box(&two), concurrence_pure, &cfg).unwrap().value)
    });
    g.finish();
}

criterion_group!(benches, pure_measures, wootters, zero_test, roof);
criterion_main!(benches);
