use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kron_bench::{certified_pairs, fields, pencils, similar_pairs};
use kron_core::{decide_equivalence, decide_similarity, descend_tower, kronecker_reduce, random, Field};
use std::hint::black_box;

fn reduce(c: &mut Criterion) {
    let mut g = c.benchmark_group("kronecker_reduce");
    for (name, f) in fields() {
        for size in [4, 8] {
            let batch = pencils(&f, size, size + 1, 16, size as u64);
            g.bench_with_input(BenchmarkId::new(name, size), &batch, |b, batch| {
                b.iter(|| batch.iter().for_each(|p| { black_box(kronecker_reduce(black_box(p)).unwrap()); }))
            });
        }
    }
    g.finish();
}

fn similarity(c: &mut Criterion) {
    let mut g = c.benchmark_group("decide_similarity");
    g.sample_size(20);
    for (name, f) in fields() {
        for n in [3, 5] {
            let batch = similar_pairs(&f, n, 2, 8, n as u64);
            g.bench_with_input(BenchmarkId::new(name, n), &batch, |b, batch| {
                b.iter(|| batch.iter().filter(|(x, y)| decide_similarity(x, y).unwrap().is_some()).count())
            });
        }
    }
    g.finish();
}

fn equivalence(c: &mut Criterion) {
    let f3 = Field::prime(3).unwrap();
    let mut r = kron_bench::rng(9);
    let batch: Vec<_> = (0..8).map(|_| random::equivalent_pair(&f3, 3, 4, 2, &mut r)).collect();
    c.bench_function("decide_equivalence/F3/3x4", |b| {
        b.iter(|| batch.iter().filter(|(x, y)| decide_equivalence(x, y).unwrap().is_some()).count())
    });
}

fn descent(c: &mut Criterion) {
    let mut g = c.benchmark_group("descend_tower");
    g.sample_size(20);
    let cases = [
        ("F2-F4", Field::prime(2).unwrap(), Field::galois(2, 2).unwrap()),
        ("F2-F8", Field::prime(2).unwrap(), Field::galois(2, 3).unwrap()),
        ("F3-F9", Field::prime(3).unwrap(), Field::galois(3, 2).unwrap()),
        ("Q-Q(sqrt2)", Field::rationals(), Field::quadratic_rational(2).unwrap()),
    ];
    for (name, k, l) in cases {
        let batch = certified_pairs(&k, &l, 4, 8, 4);
        g.bench_with_input(BenchmarkId::from_parameter(name), &batch, |b, batch| {
            b.iter(|| batch.iter().for_each(|(x, y, p)| { black_box(descend_tower(p, x, y).unwrap()); }))
        });
    }
    g.finish();
}

criterion_group!(benches, reduce, similarity, equivalence, descent);
criterion_main!(benches);
