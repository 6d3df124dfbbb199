use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use zoll_core::discmaps::{map_from_gen, ClosedFormG, DiscGrid, ExactDiscMap};
use zoll_core::forms3d::point::hopf_point;
use zoll_core::forms3d::{reeb_at, ContactForm, Generator};
use zoll_core::numerics::IntegratorConfig;
use zoll_core::reebflow::section_return;
use zoll_core::section::DiscModel;

fn reeb_eval(c: &mut Criterion) {
    let alpha = ContactForm::scaled_perturbation(1, &Generator::Mixed.poly(), 0.05);
    let x = hopf_point(0.4, 0.1, 0.7);
    c.bench_function("reeb_eval_mixed", |b| b.iter(|| reeb_at(black_box(&alpha), black_box(&x)).unwrap()));
}

fn section_return_time(c: &mut Criterion) {
    let alpha = ContactForm::scaled_perturbation(1, &Generator::HopfTilt.poly(), 0.03);
    let q = DiscModel::new(1).embed(0.6, 0.3);
    let cfg = IntegratorConfig::default();
    c.bench_function("section_return_tilt", |b| b.iter(|| section_return(&alpha, black_box(&q), cfg).unwrap()));
}

fn generated_map_eval(c: &mut Criterion) {
    let g = ClosedFormG::rotation(1.0, 0.02);
    let mut h = g.clone();
    h.radial.push(-0.004);
    let map = map_from_gen(&h);
    let pts: Vec<_> = DiscGrid::new(1.0, 4, 4).points().collect();
    c.bench_function("generated_map_eval", |b| {
        b.iter(|| pts.iter().map(|p| map.eval(p[0], p[1]).unwrap().sigma).sum::<f64>())
    });
}

criterion_group!(benches, reeb_eval, section_return_time, generated_map_eval);
criterion_main!(benches);
