use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use molspec_bench::{molecule, setup};
use molspec_core::model::derive_radial_params;
use molspec_core::spectrum::energy_model_2d;
use molspec_core::tables::{compare, fit_registry, regenerate, FIT_ROWS};
use molspec_core::{ansatz, FieldConfig, ModelKind};

fn closed_forms(c: &mut Criterion) {
    let (reg, units) = setup();
    let n2 = molecule(&reg, "N2");
    let model = n2.model(ModelKind::GeneralizedKratzer, &units).unwrap();
    let field = FieldConfig::new(1.0, 2).unwrap();
    c.bench_function("energy_model_2d kratzer", |b| {
        b.iter(|| energy_model_2d(black_box(&model), &field, black_box(3), 1, n2.mu, &units).unwrap())
    });

    let pot = n2.model(ModelKind::Pseudoharmonic, &units).unwrap().potential(n2.mu, &units).unwrap();
    let params = derive_radial_params(&pot, &FieldConfig::FREE, 1, n2.mu, &units).unwrap();
    c.bench_function("solve_series pseudoharmonic s=6", |b| {
        b.iter(|| ansatz::solve_series(black_box(&params), 6).unwrap())
    });
}

fn tables(c: &mut Criterion) {
    let (reg, units) = setup();
    c.bench_function("regenerate table 2", |b| b.iter(|| regenerate(2, &reg, &units).unwrap()));
    c.bench_function("compare table 1", |b| b.iter(|| compare(1, &reg, &units).unwrap()));
    c.bench_function("fit registry", |b| b.iter(|| fit_registry(&FIT_ROWS, &units).unwrap()));
}

criterion_group!(benches, closed_forms, tables);
criterion_main!(benches);
