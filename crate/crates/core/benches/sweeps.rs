use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use freecurrents::automorphisms::{outer_ball, DEFAULT_BALL_CAP};
use freecurrents::experiments::main_theorem_sweep;
use freecurrents::{par, Basis, Splitting, Tree};

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", true), ("sequential", false)]
}

fn main_theorem(c: &mut Criterion) {
    let basis = Basis::new(2).unwrap();
    let trees = vec![
        ("free product".to_string(), Tree::Splitting(Splitting::free_product(basis, &[0], &[1]).unwrap())),
        ("hnn".to_string(), Tree::Splitting(Splitting::hnn(basis, 0).unwrap())),
    ];
    let mut g = c.benchmark_group("main_theorem_sweep");
    g.sample_size(10);
    for (name, on) in modes() {
        par::set_enabled(on);
        g.bench_with_input(BenchmarkId::new(name, 7), &trees, |b, t| {
            b.iter(|| main_theorem_sweep(basis, black_box(t), 7).unwrap())
        });
    }
    g.finish();
    par::set_enabled(true);
}

fn ball(c: &mut Criterion) {
    let basis = Basis::new(2).unwrap();
    let mut g = c.benchmark_group("outer_ball");
    g.sample_size(10);
    for (name, on) in modes() {
        par::set_enabled(on);
        g.bench_function(BenchmarkId::new(name, 3), |b| b.iter(|| outer_ball(basis, black_box(3), DEFAULT_BALL_CAP).unwrap()));
    }
    g.finish();
    par::set_enabled(true);
}

fn cyclic_words(c: &mut Criterion) {
    let basis = Basis::new(3).unwrap();
    let mut g = c.benchmark_group("cyclic_words_up_to");
    for (name, on) in modes() {
        par::set_enabled(on);
        g.bench_function(BenchmarkId::new(name, 6), |b| b.iter(|| basis.cyclic_words_up_to(black_box(6))));
    }
    g.finish();
    par::set_enabled(true);
}

criterion_group!(benches, main_theorem, ball, cyclic_words);
criterion_main!(benches);
