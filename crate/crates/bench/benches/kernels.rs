//! Timings for the exact kernels: simplex, crossing DP, independence check,
//! and one sampler trial batch.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use oneperc::bounds::exact_crossing_probability;
use oneperc::constructions::{c5_min, ladder_vbm, path_vbm};
use oneperc::graph::{builtin_graph, make_path};
use oneperc::lattice::{sample_shell_construction, WindowConfig};
use oneperc::lp::{build_lp, solve, Direction};
use oneperc::scalar::ratio;

fn simplex(c: &mut Criterion) {
    for name in ["C4", "C5", "K4"] {
        let lp = build_lp(&builtin_graph(name).unwrap(), &ratio(3, 5), Direction::Min).unwrap();
        c.bench_function(&format!("simplex {name}"), |b| {
            b.iter(|| solve(black_box(&lp)).unwrap())
        });
    }
}

fn crossing(c: &mut Criterion) {
    let fiber = builtin_graph("K1").unwrap();
    let line = path_vbm(40, &ratio(7, 9)).unwrap();
    c.bench_function("crossing P40", |b| {
        b.iter(|| exact_crossing_probability(black_box(&line), &fiber).unwrap())
    });
    let ladder = ladder_vbm(&ratio(3, 5)).unwrap();
    let rung = make_path(2).unwrap();
    c.bench_function("crossing ladder 3/5", |b| {
        b.iter(|| exact_crossing_probability(black_box(&ladder), &rung).unwrap())
    });
}

fn independence(c: &mut Criterion) {
    let measure = c5_min(&ratio(2, 3)).unwrap();
    c.bench_function("one-independence C5", |b| {
        b.iter(|| black_box(&measure).check_one_independence().unwrap())
    });
}

fn sampler(c: &mut Criterion) {
    let cfg = WindowConfig::new(12, 0, 10).unwrap();
    let mut group = c.benchmark_group("sampler");
    group.sample_size(10);
    group.bench_function("shell R12 x10", |b| {
        b.iter(|| sample_shell_construction(black_box(&cfg)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, simplex, crossing, independence, sampler);
criterion_main!(benches);
