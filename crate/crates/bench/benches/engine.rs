use criterion::{criterion_group, criterion_main, Criterion};
use ihsat_core::{builtin_registry, circle_link_ih, parse_dataset, run_genus, taut_graded_dims};
use std::hint::black_box;

fn engine(c: &mut Criterion) {
    c.bench_function("taut_graded_dims(20)", |b| {
        b.iter(|| taut_graded_dims(black_box(20)))
    });
    c.bench_function("circle_link_ih(12)", |b| {
        b.iter(|| circle_link_ih(black_box(12)))
    });
    let reg = builtin_registry();
    c.bench_function("run_genus(4)", |b| {
        b.iter(|| run_genus(black_box(4), &reg).unwrap())
    });
    let text = include_str!("../../core/data/genus4.ihdat");
    c.bench_function("parse genus 4 datasets", |b| {
        b.iter(|| parse_dataset(black_box(text)).unwrap())
    });
}

criterion_group!(benches, engine);
criterion_main!(benches);
