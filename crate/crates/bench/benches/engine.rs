use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kron_bench::{coset, hadamard, integers, z2_basis, z2cube};
use kron_core::gallery::mixed_sign_error;
use kron_core::{alpha, alpha_n, maximal_separated_set, quasi_independent, EngineConfig};
use std::hint::black_box;

fn ladder(c: &mut Criterion) {
    let cfg = EngineConfig::with_tol(1e-3);
    let mut g = c.benchmark_group("alpha");
    for ks in [&[1, 2][..], &[1, 3], &[2, 3]] {
        let set = integers(ks);
        g.bench_with_input(BenchmarkId::from_parameter(format!("{ks:?}")), &set, |b, s| {
            b.iter(|| alpha(black_box(s), &cfg).unwrap())
        });
    }
    let set = hadamard(4.0, 5);
    let loose = EngineConfig::with_tol(0.25);
    g.bench_function("hadamard q=4", |b| b.iter(|| alpha(black_box(&set), &loose).unwrap()));
    g.finish();
}

fn roots(c: &mut Criterion) {
    let cfg = EngineConfig::with_tol(1e-6);
    let mut g = c.benchmark_group("alpha_n");
    for k in [2u64, 4, 6] {
        let set = coset(3, k);
        g.bench_with_input(BenchmarkId::new("coset n=3", k), &set, |b, s| {
            b.iter(|| alpha_n(black_box(s), 3, &cfg).unwrap())
        });
    }
    let cube = z2cube();
    g.bench_function("z2cube n=2", |b| b.iter(|| alpha_n(black_box(&cube), 2, &cfg).unwrap()));
    g.finish();
}

fn diagnostics(c: &mut Criterion) {
    let set = integers(&(1..=12).map(|k| k * k).collect::<Vec<_>>());
    c.bench_function("quasi 12 squares", |b| b.iter(|| quasi_independent(black_box(&set), 1 << 20).unwrap()));
    let basis = z2_basis(6);
    c.bench_function("net Z_2^6 basis", |b| {
        b.iter(|| maximal_separated_set(black_box(&basis), 0.29, 1, 1 << 20).unwrap())
    });
    c.bench_function("mixed N=10", |b| b.iter(|| mixed_sign_error(black_box(10), 1e-9).unwrap()));
}

criterion_group!(benches, ladder, roots, diagnostics);
criterion_main!(benches);
