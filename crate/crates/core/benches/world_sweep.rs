//! Benchmarks for the two data-parallel sweeps: per-mask warrant
//! computation behind `nec_poss`, and revision-suite evaluation.
//!
//! The mode label in each benchmark id records whether the `parallel`
//! feature was compiled in, so runs with and without
//! `--no-default-features` land next to each other in the criterion
//! report and can be compared directly.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ppredelp::fixtures;
use ppredelp::lang::{Atom, Literal};
use ppredelp::revision::suite::run_suite;
use ppredelp::revision::Operator;

const MODE: &str = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };

fn bench_nec_poss(c: &mut Criterion) {
    let program = fixtures::running_program();
    let lit = Literal::pos(Atom::prop("s"));
    let mut group = c.benchmark_group("nec_poss");
    group.sample_size(20);
    group.bench_function(BenchmarkId::new("running_s", MODE), |b| {
        b.iter(|| program.nec_poss(&lit).expect("consistent program"));
    });
    group.finish();
}

fn bench_world_sweep(c: &mut Criterion) {
    let program = fixtures::extended_example_program();
    let mut group = c.benchmark_group("world_sweep");
    group.sample_size(20);
    group.bench_function(BenchmarkId::new("wi_extended", MODE), |b| {
        b.iter(|| {
            let fresh = fixtures::extended_example_program();
            fresh.wi().len()
        });
    });
    group.bench_function(BenchmarkId::new("check_type_ii_cached", MODE), |b| {
        b.iter(|| program.check_type_ii());
    });
    group.finish();
}

fn bench_revision_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("revision_suite");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("default_200", MODE), |b| {
        b.iter(|| run_suite(Operator::Default, 11, 200));
    });
    group.finish();
}

criterion_group!(benches, bench_nec_poss, bench_world_sweep, bench_revision_suite);
criterion_main!(benches);
