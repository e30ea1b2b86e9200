use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ppsym::exec::Execution;
use ppsym::sweep::verify;
use ppsym::symmetry::SymmetryClass;

fn verify_sweep(c: &mut Criterion) {
    let classes: Vec<_> = SymmetryClass::all().collect();
    let mut group = c.benchmark_group("verify_max_side_3");
    group.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_function(name, |b| b.iter(|| black_box(verify(3, &classes, exec)).passed()));
    }
    group.finish();
}

criterion_group!(benches, verify_sweep);
criterion_main!(benches);
