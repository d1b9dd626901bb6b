use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lambek_nbe::gen::{gen_derivation, Calculus, GenConfig};
use lambek_nbe::{batch, dill, nbe};

fn normalize_batches(c: &mut Criterion) {
    let mut group = c.benchmark_group("normalize");
    group.sample_size(20);
    for n in [64usize, 256] {
        let terms: Vec<_> = (0..n as u64)
            .map(|s| gen_derivation(&GenConfig::new(s, 30)).unwrap())
            .collect();
        group.bench_with_input(BenchmarkId::new("lambek/parallel", n), &terms, |b, ts| {
            b.iter(|| batch::map(black_box(ts), |t| nbe(t).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("lambek/sequential", n), &terms, |b, ts| {
            b.iter(|| batch::map_seq(black_box(ts), |t| nbe(t).unwrap()))
        });
        let linear: Vec<_> = (0..n as u64)
            .map(|s| {
                let cfg = GenConfig {
                    calculus: Calculus::Dill,
                    ..GenConfig::new(s, 30)
                };
                dill::gen_term(&cfg).unwrap()
            })
            .collect();
        group.bench_with_input(BenchmarkId::new("dill/parallel", n), &linear, |b, ts| {
            b.iter(|| batch::map(black_box(ts), |t| dill::nbe(t).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("dill/sequential", n), &linear, |b, ts| {
            b.iter(|| batch::map_seq(black_box(ts), |t| dill::nbe(t).unwrap()))
        });
    }
    group.finish();
}

fn generate_batches(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate");
    group.sample_size(10);
    group.bench_function("lambek/parallel", |b| {
        b.iter(|| batch::map_range(0..64, |s| gen_derivation(&GenConfig::new(s, 30)).unwrap()))
    });
    group.bench_function("lambek/sequential", |b| {
        b.iter(|| batch::map_range_seq(0..64, |s| gen_derivation(&GenConfig::new(s, 30)).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, normalize_batches, generate_batches);
criterion_main!(benches);
