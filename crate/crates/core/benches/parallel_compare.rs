//! Parallel vs. sequential timings for the data-parallel inner loops:
//! dense matrix fill, exact multiplication, determinants, and exhaustive
//! eigenvector verification. Build with `--no-default-features` to drop the
//! rayon arms entirely.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use transversals::spectrum::{verify_spectrum, verify_spectrum_seq};
use transversals::transversal::{incidence_matrix, incidence_matrix_seq};

fn bench_incidence_fill(c: &mut Criterion) {
    let mut group = c.benchmark_group("incidence_fill");
    group.sample_size(20);
    for n in [3usize, 4] {
        group.bench_function(format!("seq/n{n}"), |b| {
            b.iter(|| black_box(incidence_matrix_seq(n).unwrap()))
        });
        #[cfg(feature = "parallel")]
        group.bench_function(format!("par/n{n}"), |b| {
            b.iter(|| black_box(incidence_matrix(n).unwrap()))
        });
    }
    group.finish();
}

fn bench_matmul(c: &mut Criterion) {
    let mut group = c.benchmark_group("matmul_a4");
    group.sample_size(10);
    let a4 = incidence_matrix(4).unwrap();
    group.bench_function("seq", |b| b.iter(|| black_box(a4.mul_seq(&a4).unwrap())));
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| b.iter(|| black_box(a4.mul(&a4).unwrap())));
    group.finish();
}

fn bench_determinant(c: &mut Criterion) {
    let mut group = c.benchmark_group("determinant_a3");
    group.sample_size(20);
    let a3 = incidence_matrix(3).unwrap();
    group.bench_function("seq", |b| {
        b.iter(|| black_box(a3.determinant_seq().unwrap()))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| b.iter(|| black_box(a3.determinant().unwrap())));
    group.finish();
}

fn bench_verify_spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_spectrum");
    group.sample_size(10);
    for n in [3usize, 4] {
        group.bench_function(format!("seq/n{n}"), |b| {
            b.iter(|| {
                let report = verify_spectrum_seq(n).unwrap();
                assert!(report.ok());
                black_box(report)
            })
        });
        #[cfg(feature = "parallel")]
        group.bench_function(format!("par/n{n}"), |b| {
            b.iter(|| {
                let report = verify_spectrum(n).unwrap();
                assert!(report.ok());
                black_box(report)
            })
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_incidence_fill,
    bench_matmul,
    bench_determinant,
    bench_verify_spectrum
);
criterion_main!(benches);
