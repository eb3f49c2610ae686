use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use specdyn_core::classification::classify_point;
use specdyn_core::dihedral::iterate_f;
use specdyn_core::koopman::{build_grigorchuk_level, pencil_eigenvalues};
use specdyn_core::render::{render_slice, RenderConfig};
use specdyn_core::Point2;

fn iterate(c: &mut Criterion) {
    let p = Point2::from_real([2.0, 0.5, 0.3]).unwrap();
    c.bench_function("iterate_f/100", |b| b.iter(|| iterate_f(black_box(&p), 100, true).unwrap()));
    c.bench_function("classify_point", |b| b.iter(|| classify_point(black_box(&p), 100, 1e-10).unwrap()));
}

fn eigensolver(c: &mut Criterion) {
    let one = Complex64::new(1.0, 0.0);
    let mut g = c.benchmark_group("hecke_eigenvalues");
    g.sample_size(10);
    for level in [6u32, 8] {
        let rep = build_grigorchuk_level(level).unwrap();
        g.bench_function(format!("level_{level}"), |b| b.iter(|| pencil_eigenvalues(&rep, &[one; 4]).unwrap()));
    }
    g.finish();
}

fn render(c: &mut Criterion) {
    let cfg = RenderConfig { resolution: 64, ..Default::default() };
    let mut g = c.benchmark_group("render");
    g.sample_size(10);
    g.bench_function("classification_64", |b| b.iter(|| render_slice(black_box(&cfg)).unwrap()));
    g.finish();
}

criterion_group!(benches, iterate, eigensolver, render);
criterion_main!(benches);
