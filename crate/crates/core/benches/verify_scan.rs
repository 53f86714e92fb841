//! Compares the sequential and data-parallel saturation scans on
//! constructed minimum families, where verification is dominated by
//! probing every missing set.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use antichain_sat::{construct_saturated, is_k_antichain_saturated_with};

fn verify_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_scan");
    for (n, k) in [(11u32, 7u64), (13, 21), (15, 36)] {
        let (family, _) = construct_saturated(n, k).expect("construction in the exact range");
        group.bench_with_input(
            BenchmarkId::new("sequential", format!("n{n}_k{k}")),
            &family,
            |b, f| {
                b.iter(|| {
                    let report = is_k_antichain_saturated_with(f, k, false).unwrap();
                    assert!(report.is_saturated);
                })
            },
        );
        group.bench_with_input(
            BenchmarkId::new("parallel", format!("n{n}_k{k}")),
            &family,
            |b, f| {
                b.iter(|| {
                    let report = is_k_antichain_saturated_with(f, k, true).unwrap();
                    assert!(report.is_saturated);
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, verify_scan);
criterion_main!(benches);
