use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use polycheck_bench::{maze_poset, maze_queries};
use polycheck_core::check::check_expanded;
use polycheck_core::minimise::{minimise, EquivalenceMode};
use polycheck_core::model::write_model;
use polycheck_core::{build_poset, parse_model, synth};

fn load(c: &mut Criterion) {
    let text = write_model(&synth::maze_model(3, 2));
    c.bench_function("parse+load maze 3x2", |b| {
        b.iter(|| build_poset(&parse_model(&text).unwrap()).unwrap())
    });
}

fn check(c: &mut Criterion) {
    let poset = maze_poset(3, 2);
    let script = maze_queries();
    let mut g = c.benchmark_group("check maze 3x2");
    for workers in [1, 4] {
        g.bench_with_input(BenchmarkId::from_parameter(workers), &workers, |b, &w| {
            b.iter(|| check_expanded(&poset, &script, w).unwrap())
        });
    }
    g.finish();
}

fn minimise_maze(c: &mut Criterion) {
    let poset = maze_poset(3, 2);
    let mut g = c.benchmark_group("minimise maze 3x2");
    g.sample_size(10);
    for mode in [EquivalenceMode::Gamma, EquivalenceMode::Eta] {
        g.bench_function(mode.to_string(), |b| b.iter(|| minimise(&poset, mode)));
    }
    g.finish();
}

criterion_group!(benches, load, check, minimise_maze);
criterion_main!(benches);
