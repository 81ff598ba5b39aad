use std::hint::black_box;

use blowup_bench::corpus_spec;
use blowup_core::{run_command, Command, RunOptions};
use criterion::{criterion_group, criterion_main, Criterion};

fn commands(c: &mut Criterion) {
    let opts = RunOptions::default();
    for name in ["square", "quartic", "mixed"] {
        let spec = corpus_spec(name);
        c.bench_function(&format!("invariants_{name}"), |b| {
            b.iter(|| run_command(Command::Invariants, black_box(&spec), &opts).unwrap())
        });
        c.bench_function(&format!("verify_{name}"), |b| {
            b.iter(|| run_command(Command::Verify, black_box(&spec), &opts).unwrap())
        });
    }
    let space = corpus_spec("space-square");
    c.bench_function("hilbert_space-square", |b| {
        b.iter(|| run_command(Command::Hilbert, black_box(&space), &opts).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = commands
}
criterion_main!(benches);
