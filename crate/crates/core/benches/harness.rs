//! Parallel against single-threaded runs of the two heaviest workloads.
//! Build with `--no-default-features` to time the plain-iterator fallback instead.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use trs_core::axioms::{check_axioms, HarnessBudget};
use trs_core::gapw::{GapSpace, GapWord};
use trs_core::param_words::ParamSpace;
use trs_core::search::{pigeonhole_demo, SearchBudget};
use trs_core::par;

fn threads() -> Vec<usize> {
    let all = std::thread::available_parallelism().map_or(1, |n| n.get());
    if all > 1 {
        vec![1, all]
    } else {
        vec![1]
    }
}

fn harness(c: &mut Criterion) {
    let mut g = c.benchmark_group("check_axioms");
    g.sample_size(10);
    let param = ParamSpace::new(1, false);
    let gapw = GapSpace::new(1, 2).unwrap();
    for n in threads() {
        g.bench_with_input(BenchmarkId::new("param(t=1) extent 4", n), &n, |b, &n| {
            b.iter(|| par::with_threads(n, || check_axioms(&param, &HarnessBudget::new(4))))
        });
        g.bench_with_input(BenchmarkId::new("gapw(t=1,m=2) extent 3", n), &n, |b, &n| {
            b.iter(|| par::with_threads(n, || check_axioms(&gapw, &HarnessBudget::new(3))))
        });
    }
    g.finish();
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("pigeonhole");
    g.sample_size(10);
    let space = GapSpace::new(1, 2).unwrap();
    let a = GapWord::identity(1, 2, 4);
    let support = |f: &GapWord| f.cells().iter().filter(|&&x| x == f.t()).count() % 2;
    for n in threads() {
        g.bench_with_input(BenchmarkId::new("gapw(t=1,m=2) identity 4", n), &n, |b, &n| {
            b.iter(|| par::with_threads(n, || pigeonhole_demo(&space, &a, &support, &SearchBudget::new(2)).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, harness, search);
criterion_main!(benches);
