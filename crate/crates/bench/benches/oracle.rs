use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use molspec_bench::{molecule, setup};
use molspec_core::oracle::{auto_grid, fd_eigenvalues, validate_spectrum, RadialGrid, DEFAULT_POINTS};
use molspec_core::tridiag::SymTridiagonal;
use molspec_core::{FieldConfig, ModelKind};

fn eigensolver(c: &mut Criterion) {
    let n = 4000;
    let t = SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
    c.bench_function("sturm bisection 4 of 4000", |b| b.iter(|| black_box(&t).lowest(4).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let (reg, units) = setup();
    let ch = molecule(&reg, "CH");
    let model = ch.model(ModelKind::GeneralizedKratzer, &units).unwrap();
    let pot = model.potential(ch.mu, &units).unwrap();
    let free = FieldConfig::FREE;
    c.bench_function("auto_grid kratzer", |b| {
        b.iter(|| auto_grid(&pot, &free, 0, ch.mu, 4, DEFAULT_POINTS, &units).unwrap())
    });
    let grid = RadialGrid::new(2.0, DEFAULT_POINTS).unwrap();
    c.bench_function("fd_eigenvalues 4000 points", |b| {
        b.iter(|| fd_eigenvalues(&pot, &free, 0, ch.mu, &grid, 4, &units).unwrap())
    });
    c.bench_function("validate_spectrum kratzer 4 levels", |b| {
        b.iter(|| validate_spectrum(&model, &free, 1, ch.mu, 4, &units).unwrap())
    });
}

criterion_group!(benches, eigensolver, oracle);
criterion_main!(benches);
