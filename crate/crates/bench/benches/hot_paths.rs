use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use listdec_core::codes::{enumerate_codewords, min_avg_distance_over_subsets, GeneratorMatrix};
use listdec_core::oracle::{list_size_at_radius, OracleMode};
use listdec_core::rip::{phi_lin_sub, rip_constant_exact, rip_constant_sampled, sample_rows};
use listdec_core::{FieldSpec, Rational};

fn bench_encode_subsampled(c: &mut Criterion) {
    let spec = FieldSpec::new(2, 1).unwrap();
    let rows = sample_rows(&spec, 10, 128, 1).unwrap();
    c.bench_function("phi_lin_sub q2 ktilde10 t128", |b| {
        b.iter(|| phi_lin_sub(&spec, 10, &rows.indices).unwrap())
    });
}

fn bench_rip(c: &mut Criterion) {
    let spec = FieldSpec::new(2, 1).unwrap();
    let rows = sample_rows(&spec, 5, 24, 2).unwrap();
    let m = phi_lin_sub(&spec, 5, &rows.indices).unwrap();
    let normalizer = 24f64.sqrt();
    c.bench_function("rip_constant_exact k3 N32", |b| {
        b.iter(|| rip_constant_exact(&m, 3, normalizer).unwrap())
    });

    let big_rows = sample_rows(&spec, 10, 128, 3).unwrap();
    let big = phi_lin_sub(&spec, 10, &big_rows.indices).unwrap();
    c.bench_function("rip_constant_sampled k3 N1024", |b| {
        b.iter(|| rip_constant_sampled(&big, 3, 128f64.sqrt(), 2, 7).unwrap())
    });
}

fn bench_oracle_and_distance(c: &mut Criterion) {
    let spec = Arc::new(FieldSpec::new(2, 1).unwrap());
    let gen = GeneratorMatrix::random(spec, 3, 12, 4).unwrap();
    let code = enumerate_codewords(gen).unwrap();
    c.bench_function("oracle exhaustive q2 n12", |b| {
        b.iter(|| {
            list_size_at_radius(&code, Rational::new(1, 4), OracleMode::Exhaustive).unwrap()
        })
    });
    c.bench_function("min_avg_distance L3 over 8 codewords", |b| {
        b.iter(|| min_avg_distance_over_subsets(&code, 3).unwrap())
    });
}

criterion_group!(benches, bench_encode_subsampled, bench_rip, bench_oracle_and_distance);
criterion_main!(benches);
