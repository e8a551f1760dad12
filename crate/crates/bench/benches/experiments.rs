use criterion::{criterion_group, criterion_main, Criterion};
use qdswap_core::{run_phase_grid, run_random, DeviceParams, Mode, QubitState, SwapTest};
use std::hint::black_box;

fn experiments(c: &mut Criterion) {
    let p = DeviceParams::preset();
    c.bench_function("SwapTest::new physical", |b| {
        b.iter(|| SwapTest::new(Mode::Physical, black_box(&p)).unwrap())
    });
    let test = SwapTest::new(Mode::Physical, &p).unwrap();
    let (a, s) = (
        QubitState::from_bloch(0.4, 1.1),
        QubitState::from_bloch(2.0, -0.3),
    );
    c.bench_function("SwapTest::run", |b| {
        b.iter(|| test.run(black_box(&a), black_box(&s)).unwrap())
    });
    c.bench_function("run_random 100", |b| {
        b.iter(|| run_random(100, black_box(42), Mode::Physical, &p).unwrap())
    });
    c.bench_function("run_phase_grid 21", |b| {
        b.iter(|| run_phase_grid(black_box(21), Mode::Physical, &p).unwrap())
    });
}

criterion_group!(benches, experiments);
criterion_main!(benches);
