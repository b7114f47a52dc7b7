//! Offer throughput of the top-B tracker on SOFS-like traffic: mostly
//! decreasing values for already kept features plus a stream of newcomers.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion, Throughput};
use ofs_core::TopBTracker;

const OFFERS: usize = 10_000;

/// Deterministic offers over 5000 indices; each index's value only shrinks.
fn offers() -> Vec<(usize, f64)> {
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut current = vec![1.0f64; 5000];
    (0..OFFERS)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let idx = (state % 5000) as usize;
            let shrink = 0.5 + (state >> 40) as f64 / (1u64 << 25) as f64;
            current[idx] *= shrink;
            (idx, current[idx])
        })
        .collect()
}

fn offer_throughput(c: &mut Criterion) {
    let sequence = offers();
    let mut group = c.benchmark_group("tracker_offer");
    group.throughput(Throughput::Elements(OFFERS as u64));
    for capacity in [16usize, 128, 1024] {
        group.bench_with_input(
            BenchmarkId::from_parameter(capacity),
            &capacity,
            |b, &capacity| {
                b.iter_batched_ref(
                    || TopBTracker::new(capacity).unwrap(),
                    |tracker| {
                        for &(idx, value) in &sequence {
                            black_box(tracker.offer(idx, value));
                        }
                    },
                    BatchSize::SmallInput,
                )
            },
        );
    }
    group.finish();
}

criterion_group!(benches, offer_throughput);
criterion_main!(benches);
