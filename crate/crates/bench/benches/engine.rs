use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nalgebra::DVector;
use rickit::diagram::{analyze, Family, FamilyParams};
use rickit::geometry::{
    curvature, directional_operator, ksum_min, ric_k_min_at, PulledBack, SphereProductChart, DEFAULT_STEP,
};
use rickit::spaces::{cheeger_s3s3, cheeger_s3s5, hopf_vertical, s3cp2_chart, s3s5, QuotientMetric};
use rickit::Quat;

fn curvature_benches(c: &mut Criterion) {
    let m = cheeger_s3s3(1.0).unwrap();
    let pt = rickit::spaces::s3s3_point(Quat::new(0.5, 0.5, 0.5, 0.5), Quat::ONE);
    let chart = SphereProductChart::new(&pt, &[3, 3]);
    let metric = PulledBack { chart: &chart, ambient: &m };
    let zero = DVector::zeros(6);
    c.bench_function("curvature cheeger s3xs3", |b| {
        b.iter(|| curvature(black_box(&metric), &zero, DEFAULT_STEP).unwrap())
    });

    let m5 = cheeger_s3s5(1.0).unwrap();
    let p5 = s3s5::gamma(0.5);
    let chart5 = s3cp2_chart(&p5, 0).unwrap();
    let quotient = QuotientMetric { chart: &chart5, ambient: &m5, vertical: &hopf_vertical };
    let zero7 = DVector::zeros(7);
    c.bench_function("curvature s3xcp2 quotient", |b| {
        b.iter(|| curvature(black_box(&quotient), &zero7, DEFAULT_STEP).unwrap())
    });

    let curv = curvature(&metric, &zero, DEFAULT_STEP).unwrap();
    let x = DVector::from_vec(vec![0.3, -0.2, 0.5, 0.1, 0.7, -0.4]);
    c.bench_function("directional operator and 2-sum", |b| {
        b.iter(|| ksum_min(&directional_operator(black_box(&curv), &x, None).unwrap(), 2))
    });
    c.bench_function("ric_2 search, 256 samples", |b| {
        b.iter(|| ric_k_min_at(black_box(&curv), 2, 256, 1, None).unwrap())
    });
}

fn diagram_benches(c: &mut Criterion) {
    let (d, _) = Family::from_name("P_A7", &FamilyParams::new()).unwrap().build().unwrap();
    c.bench_function("analyze P_A7", |b| b.iter(|| analyze(black_box(&d)).unwrap()));
}

criterion_group!(benches, curvature_benches, diagram_benches);
criterion_main!(benches);
