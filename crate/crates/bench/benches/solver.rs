use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use stirred::bounds;
use stirred::rational::ratio;
use stirred::solvers::{self, SearchLimits, Target};
use stirred_bench::{alternating, stirred_instance};

fn bench_exact_sorted(c: &mut Criterion) {
    let limits = SearchLimits::default();
    let mut group = c.benchmark_group("exact_sorted");
    for cells in [8usize, 12, 16] {
        let config = alternating(cells);
        group.bench_with_input(BenchmarkId::new("alternating", cells), &config, |b, config| {
            b.iter(|| solvers::exact_min_cost(black_box(config), &Target::Sorted, &limits).unwrap())
        });
        let random = stirred_instance(cells, 11);
        group.bench_with_input(BenchmarkId::new("stirred", cells), &random, |b, config| {
            b.iter(|| solvers::exact_min_cost(black_box(config), &Target::Sorted, &limits).unwrap())
        });
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    c.bench_function("brute_force_table_n8_sorted", |b| {
        b.iter(|| solvers::brute_force_table(black_box(8), &Target::Sorted).unwrap())
    });
}

fn bench_heuristics(c: &mut Criterion) {
    let big = alternating(4096);
    c.bench_function("merge_heuristic_n4096", |b| {
        b.iter(|| solvers::merge_heuristic(black_box(&big)).unwrap())
    });
    let medium = alternating(256);
    c.bench_function("bubble_heuristic_n256", |b| {
        b.iter(|| solvers::bubble_heuristic(black_box(&medium)))
    });
}

fn bench_bounds(c: &mut Criterion) {
    let kappa = ratio(1, 2);
    let eps = ratio(1, 1i64 << 40);
    c.bench_function("growth_index_eps_2pow40", |b| {
        b.iter(|| bounds::n_of_eps(black_box(&kappa), black_box(&eps)).unwrap())
    });
}

criterion_group!(benches, bench_exact_sorted, bench_oracle, bench_heuristics, bench_bounds);
criterion_main!(benches);
