use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use forriqp_core::circuits::AbsoluteProcedure;
use forriqp_core::cube;
use forriqp_core::forrelation::{phi, sample_forrelated_pair};
use forriqp_core::par;
use forriqp_core::rng::{self, CounterRng};

fn input(len: usize) -> Vec<f64> {
    let mut r = CounterRng::new(1, 0);
    (0..len).map(|_| rng::unit_f64(&mut r) - 0.5).collect()
}

fn bench_fwht(c: &mut Criterion) {
    let mut group = c.benchmark_group("fwht");
    for log in [12usize, 16, 20] {
        let data = input(1 << log);
        group.throughput(Throughput::Elements(1 << log));
        group.bench_with_input(BenchmarkId::new("serial", log), &data, |b, d| {
            b.iter_batched_ref(
                || d.clone(),
                |v| cube::fwht_serial(black_box(v)).unwrap(),
                criterion::BatchSize::LargeInput,
            )
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", log), &data, |b, d| {
            b.iter_batched_ref(
                || d.clone(),
                |v| cube::fwht_parallel(black_box(v)).unwrap(),
                criterion::BatchSize::LargeInput,
            )
        });
    }
    group.finish();
}

fn bench_phi(c: &mut Criterion) {
    let mut group = c.benchmark_group("phi");
    for n in [10usize, 16] {
        let pair = sample_forrelated_pair(n, &mut CounterRng::new(2, n as u64)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &pair, |b, p| {
            b.iter(|| phi(black_box(&p.f), black_box(&p.g)).unwrap())
        });
    }
    group.finish();
}

fn bench_trials(c: &mut Criterion) {
    let n = 5;
    let pair = sample_forrelated_pair(n, &mut CounterRng::new(3, 0)).unwrap();
    let proc = AbsoluteProcedure::new(&pair.f, &pair.g).unwrap();
    let trials = 20_000;
    let run = |i: usize| proc.sample(&mut CounterRng::for_trial(9, i as u64));
    let mut group = c.benchmark_group("trials");
    group.throughput(Throughput::Elements(trials as u64));
    group.bench_function("serial", |b| {
        b.iter(|| par::map_indexed_serial(trials, run).iter().filter(|&&a| a).count())
    });
    group.bench_function("parallel", |b| {
        b.iter(|| par::map_indexed(trials, run).iter().filter(|&&a| a).count())
    });
    group.finish();
}

criterion_group!(benches, bench_fwht, bench_phi, bench_trials);
criterion_main!(benches);
