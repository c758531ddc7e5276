use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qf_bench::{quandles, relator_matrix, word};
use qf_core::lattice::smith_normal_form;
use qf_core::rep::{abelian_faithful_rep, induced_rep};
use qf_core::{Caps, EnvelopeModel};

fn build(c: &mut Criterion) {
    let mut g = c.benchmark_group("envelope_build");
    for (name, q) in quandles() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &q, |b, q| {
            b.iter(|| EnvelopeModel::build(black_box(q), &Caps::default()).unwrap())
        });
    }
    g.finish();
}

fn normal_forms(c: &mut Criterion) {
    let mut g = c.benchmark_group("normal_form");
    for (name, q) in quandles() {
        let model = EnvelopeModel::build(&q, &Caps::default()).unwrap();
        for len in [16, 256] {
            let w = word(q.len(), len, 7);
            g.bench_with_input(BenchmarkId::new(name, len), &w, |b, w| b.iter(|| model.normal_form(black_box(w))));
        }
    }
    g.finish();
}

fn representation(c: &mut Criterion) {
    let mut g = c.benchmark_group("induced_rep");
    for (name, q) in quandles() {
        let model = EnvelopeModel::build(&q, &Caps::default()).unwrap();
        let rho = abelian_faithful_rep(model.k_group());
        g.bench_function(name, |b| b.iter(|| induced_rep(black_box(&model), &rho).unwrap()));
    }
    g.finish();
}

fn smith(c: &mut Criterion) {
    let mut g = c.benchmark_group("relator_snf");
    for (name, q) in quandles() {
        let rows = relator_matrix(&q);
        g.bench_with_input(BenchmarkId::from_parameter(name), &rows, |b, rows| {
            b.iter(|| smith_normal_form(black_box(rows), q.len()))
        });
    }
    g.finish();
}

criterion_group!(benches, build, normal_forms, representation, smith);
criterion_main!(benches);
