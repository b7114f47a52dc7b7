//! Parsing throughput of a libsvm file, inline and through the threaded
//! reader stage.

use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use ofs_core::data::{generate_synthetic, write_libsvm, Dataset, SyntheticSpec};
use ofs_core::pipeline::{with_loaded, LoaderMode};

const EXAMPLES: usize = 5000;

fn loader_throughput(c: &mut Criterion) {
    let dir = tempfile::tempdir().unwrap();
    let syn = generate_synthetic(SyntheticSpec {
        n_train: EXAMPLES,
        n_test: 1,
        dim: 100_000,
        idim: 50,
        ndim: 100,
        seed: 2,
    })
    .unwrap();
    let mut group = c.benchmark_group("loader");
    group.sample_size(10).measurement_time(Duration::from_secs(5));
    group.throughput(Throughput::Elements(EXAMPLES as u64));
    for name in ["train.svm", "train.svm.gz"] {
        let path = dir.path().join(name);
        write_libsvm(&path, syn.train.open().unwrap().map(Result::unwrap)).unwrap();
        let data = Dataset::libsvm(&path);
        for (mode_name, mode) in [
            ("inline", LoaderMode::Inline),
            ("threaded", LoaderMode::default()),
        ] {
            group.bench_function(BenchmarkId::new(mode_name, name), |b| {
                b.iter(|| {
                    with_loaded(data.open().unwrap(), mode, |examples| {
                        examples.map(|e| e.unwrap().nnz()).sum::<usize>()
                    })
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, loader_throughput);
criterion_main!(benches);
