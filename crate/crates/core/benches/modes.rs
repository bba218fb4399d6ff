//! Sequential vs parallel execution of the three batch drivers.
//!
//! The `parallel` feature routes batch work through rayon; these benches
//! pit that path against an always-sequential equivalent on identical
//! inputs, so the dispatch overhead and the scaling win are both visible.
//! Build with `--no-default-features` to measure the pure sequential
//! library (both arms then coincide).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use zp2_core::census::{census_run, classify_prime, sieve_primes};
use zp2_core::check::grid_check;
use zp2_core::exec;
use zp2_core::represent::{coverage_with_context, verify_certificate, Family, FamilyContext};

/// Smallest admissible prime above `from` for the family, if any below 200.
fn first_admissible(family: Family, from: u64) -> Option<FamilyContext> {
    sieve_primes(199)
        .into_iter()
        .filter(|&p| p >= from)
        .find_map(|p| FamilyContext::new(family, p).ok())
}

fn bench_census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    for limit in [2_000u64, 10_000] {
        group.bench_with_input(BenchmarkId::new("seq", limit), &limit, |bench, &limit| {
            let primes: Vec<u64> = sieve_primes(limit)
                .into_iter()
                .filter(|&p| p >= 5)
                .collect();
            bench.iter(|| {
                let rows = exec::map_sequential(primes.clone(), |p| {
                    classify_prime(p, 2).expect("odd prime")
                });
                rows.len()
            });
        });
        group.bench_with_input(BenchmarkId::new("par", limit), &limit, |bench, &limit| {
            bench.iter(|| {
                let (rows, _) = census_run(limit, 2).expect("valid census inputs");
                rows.len()
            });
        });
    }
    group.finish();
}

fn bench_grid(c: &mut Criterion) {
    let ctx = first_admissible(Family::A1, 80).expect("an admissible prime below 200");
    let p = ctx.p();
    let mut group = c.benchmark_group("grid");
    group.bench_function(BenchmarkId::new("seq", p), |bench| {
        bench.iter(|| {
            let mut verified = 0u64;
            for v1 in 0..p {
                for v2 in 0..p {
                    let cert = ctx.certificate(v1, v2).expect("admissible prime");
                    if verify_certificate(&cert).is_ok() {
                        verified += 1;
                    }
                }
            }
            verified
        });
    });
    group.bench_function(BenchmarkId::new("par", p), |bench| {
        bench.iter(|| grid_check(&ctx).verified);
    });
    group.finish();
}

fn bench_coverage(c: &mut Criterion) {
    let Some(ctx) = first_admissible(Family::A4 { b: 3 }, 5) else {
        return; // nothing admissible at desk scale; skip rather than lie
    };
    let p = ctx.p();
    let b = 3u64;
    let mut group = c.benchmark_group("coverage");
    group.bench_function(BenchmarkId::new("seq", p), |bench| {
        bench.iter(|| {
            let mut class_sizes = vec![0u64; b as usize];
            for v1 in 0..p {
                for v2 in 0..p {
                    let cert = ctx.certificate(v1, v2).expect("admissible prime");
                    class_sizes[cert.shift_class as usize] += 1;
                }
            }
            class_sizes
        });
    });
    group.bench_function(BenchmarkId::new("par", p), |bench| {
        bench.iter(|| coverage_with_context(&ctx).expect("admissible prime").class_sizes);
    });
    group.finish();
}

criterion_group!(benches, bench_census, bench_grid, bench_coverage);
criterion_main!(benches);
