use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use modfio_core::exponents::{check_pseudo, lattice_invariants, region_scan, RegionSpec};
use modfio_core::{CheckerId, IndexTuple, Recip};

fn exponents(c: &mut Criterion) {
    let t = IndexTuple::new(Recip::ZERO, Recip::ONE, Recip::HALF, Recip::HALF, Recip::HALF, Recip::HALF);
    c.bench_function("check_pseudo", |b| b.iter(|| check_pseudo(black_box(&t))));
    c.bench_function("lattice_invariants_k4", |b| b.iter(|| lattice_invariants(black_box(4))));
    let mut group = c.benchmark_group("region");
    group.sample_size(10);
    group.bench_function("figure1_pseudo_k64", |b| {
        b.iter(|| region_scan(&RegionSpec::figure1(CheckerId::Pseudo, black_box(64))).unwrap())
    });
    group.finish();
}

criterion_group!(benches, exponents);
criterion_main!(benches);
