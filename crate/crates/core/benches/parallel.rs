use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use omegakit_core::crossval::oracle_diff;
use omegakit_core::dissection::{dissect_geometric, parse_length, parse_rational, UnaryLanguage};
use omegakit_core::omega::audit::{audit_omega_classes, audit_perfectness};
use omegakit_core::recognizers::enumerate_enw_with;
use omegakit_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bench_oracle_diff(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_diff");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "len<=7 + 5000 random"), &exec, |b, &exec| {
            b.iter(|| oracle_diff(7, 5000, 1, exec).unwrap())
        });
    }
    group.finish();
}

fn bench_enumerate_enw(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_enw");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "8 leaves"), &exec, |b, &exec| {
            b.iter(|| enumerate_enw_with(8, exec).unwrap())
        });
    }
    group.finish();
}

fn bench_audits(c: &mut Criterion) {
    let mut group = c.benchmark_group("audits");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "omega classes 2..=64"), &exec, |b, &exec| {
            b.iter(|| audit_omega_classes(2..=64, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new(name, "perfectness len<=24"), &exec, |b, &exec| {
            b.iter(|| audit_perfectness(24, exec))
        });
    }
    group.finish();
}

fn bench_dissect(c: &mut Criterion) {
    let mut group = c.benchmark_group("dissect");
    let cap = parse_length("10^2000").unwrap();
    let two = parse_rational("2").unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "fib c=2 cap 10^2000"), &exec, |b, &exec| {
            b.iter(|| dissect_geometric(&UnaryLanguage::Fib, &two, &cap, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_oracle_diff, bench_enumerate_enw, bench_audits, bench_dissect);
criterion_main!(benches);
