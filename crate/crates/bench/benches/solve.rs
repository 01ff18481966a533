use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use mopuc_bench::{indices, three_atomic, two_functionals};
use mopuc_core::hermite_pade::{certify_all, default_depth};
use mopuc_core::relations::verify_all_at;
use mopuc_core::{ComplexFloat, GaussianRational, IndexPair};

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    for (n, m) in [(vec![1, 0, 1], vec![0, 1, 0]), (vec![2, 1, 2], vec![1, 1, 1])] {
        let idx = IndexPair::new(n, m).unwrap();
        let label = idx.to_string();
        // A fresh solver per iteration so the memo does not hide the elimination.
        group.bench_with_input(BenchmarkId::new("exact", &label), &idx, |b, idx| {
            b.iter(|| three_atomic::<GaussianRational>().solve(black_box(idx)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("float", &label), &idx, |b, idx| {
            b.iter(|| three_atomic::<ComplexFloat>().solve(black_box(idx)).unwrap())
        });
    }
    group.finish();
}

fn relation_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("relations");
    group.sample_size(10);
    let idx = indices(2, 2, 3);
    group.bench_function("verify_all_at s2 size<=3", |b| {
        b.iter(|| {
            let mop = two_functionals::<GaussianRational>();
            idx.iter().map(|i| verify_all_at(&mop, i).unwrap().len()).sum::<usize>()
        })
    });
    group.finish();
}

fn certification(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermite_pade");
    group.sample_size(10);
    let probe = two_functionals::<GaussianRational>();
    let idx = indices(2, 3, 4)
        .into_iter()
        .filter(|i| i.abs_n() + i.abs_m() == 4 && i.n_nonnegative() && i.m_nonnegative() && !i.is_boundary())
        .find(|i| probe.is_normal(i).unwrap())
        .expect("a normal index of size 4");
    group.bench_function(format!("certify_all s2 {idx}"), |b| {
        b.iter(|| {
            let mop = two_functionals::<GaussianRational>();
            certify_all(&mop, &idx, default_depth(&idx)).unwrap().len()
        })
    });
    group.finish();
}

criterion_group!(benches, solve, relation_suite, certification);
criterion_main!(benches);
