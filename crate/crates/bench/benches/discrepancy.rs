use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use stsdisc_core::anneal::{sa_minimise, AnnealConfig};
use stsdisc_core::search::two_flip_basin;
use stsdisc_core::stats::random_colouring;
use stsdisc_core::sts::{construct, enumerate_all_labelled, sample_labellings};
use stsdisc_core::{cut_colouring_of_size, max_disc_over_systems, Order};

fn max_over_family(c: &mut Criterion) {
    let o = Order::new(21).unwrap();
    let family = sample_labellings(&construct(o).unwrap(), 200, 42).unwrap();
    let chi = random_colouring(o, 3, 1).unwrap();
    c.bench_function("max_disc n=21 K=200 r=3", |b| {
        b.iter(|| max_disc_over_systems(black_box(family.systems()), black_box(&chi)).unwrap())
    });
}

fn enumeration(c: &mut Criterion) {
    let o = Order::new(9).unwrap();
    c.bench_function("enumerate n=9", |b| {
        b.iter(|| enumerate_all_labelled(black_box(o)).unwrap())
    });
}

fn basin(c: &mut Criterion) {
    let o = Order::new(9).unwrap();
    let family = enumerate_all_labelled(o).unwrap();
    let base = cut_colouring_of_size(o, 2).unwrap();
    c.bench_function("two-flip basin n=9", |b| {
        b.iter(|| two_flip_basin(black_box(&base), &family).unwrap())
    });
}

fn annealing(c: &mut Criterion) {
    let o = Order::new(21).unwrap();
    let family = sample_labellings(&construct(o).unwrap(), 200, 42).unwrap();
    let cfg = AnnealConfig {
        restarts: 1,
        steps_per_restart: Some(10_000),
        ..AnnealConfig::new(3)
    };
    let mut group = c.benchmark_group("anneal");
    group.sample_size(20);
    group.bench_function("10k steps n=21 K=200 r=3", |b| {
        b.iter(|| sa_minimise(&family, black_box(&cfg)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, max_over_family, enumeration, basin, annealing);
criterion_main!(benches);
