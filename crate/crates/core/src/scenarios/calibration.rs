//! Engine calibration on spaces with known curvature.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde_json::Value;

use super::{check_samples, elapsed_ms, params, Criterion, ScenarioError, ScenarioResult};
use crate::geometry::{
    curvature, ric_k_min_at, sectional, Chart, Euclidean, PulledBack, SphereProductChart, DEFAULT_STEP,
};
use crate::sampling::{child_rng, random_unit_vector, standard_normal};
use crate::spaces::{cp2_affine_block, s3s5, NormalizedChart, QuotientMetric};

const POINTS: usize = 10;

fn random_coords<R: Rng>(m: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(m, |_, _| standard_normal(rng))
}

/// Round `S⁵` in graph charts: sectional curvatures of random planes at random chart points.
pub fn run_round_s5(planes: usize, seed: u64) -> Result<ScenarioResult, ScenarioError> {
    check_samples(planes, 1)?;
    let start = Instant::now();
    let per_point: Vec<(f64, f64)> = (0..POINTS)
        .into_par_iter()
        .map(|i| {
            let mut rng = child_rng(seed, i as u64);
            let base = random_unit_vector(6, &mut rng);
            let chart = SphereProductChart::new(&base, &[5]);
            let metric = PulledBack { chart: &chart, ambient: &Euclidean };
            // off-origin point with |u| = 0.3
            let u = random_unit_vector(5, &mut rng) * 0.3;
            let c = curvature(&metric, &u, DEFAULT_STEP)?;
            let mut worst: f64 = 0.0;
            for _ in 0..planes {
                let (x, y) = (random_coords(5, &mut rng), random_coords(5, &mut rng));
                worst = worst.max((sectional(&c, &x, &y)? - 1.0).abs());
            }
            Ok((worst, c.defect))
        })
        .collect::<Result<_, ScenarioError>>()?;
    let sec_err = per_point.iter().map(|p| p.0).fold(0.0, f64::max);
    let defect = per_point.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(ScenarioResult {
        scenario: "round-s5".into(),
        params: params([("points", POINTS.into()), ("planes_per_point", planes.into()), ("h", DEFAULT_STEP.into())]),
        seed,
        criteria: vec![
            Criterion::close("max |sec - 1|", 0.0, sec_err, 1e-4),
            Criterion::at_most("max symmetry defect", 1e-4, defect),
        ],
        wall_ms: elapsed_ms(start),
    })
}

fn hopf_vertical6(p: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::from_columns(&[DVector::from_fn(6, |r, _| if r < 3 { -p[r + 3] } else { p[r - 3] })])
}

/// `i·v` on ℂ³ in the (Re; Im) layout.
fn times_i(v: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(6, |r, _| if r < 3 { -v[r + 3] } else { v[r - 3] })
}

/// Fubini–Study from the Hopf fibration `S⁵ → ℂP²`: `sec = 1 + 3⟨x, i y⟩²` for
/// orthonormal horizontal `x, y`.
pub(crate) fn fubini_study(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let xn = x.normalize();
    let yo = y - &xn * xn.dot(y);
    let yn = yo.normalize();
    1.0 + 3.0 * xn.dot(&times_i(&yn)).powi(2)
}

/// Quotient of round `S⁵` by the Hopf circle against the closed form.
pub fn run_hopf_cp2(planes: usize, seed: u64) -> Result<ScenarioResult, ScenarioError> {
    check_samples(planes, 1)?;
    let start = Instant::now();
    let per = planes.div_ceil(POINTS);
    let errs: Vec<f64> = (0..POINTS)
        .into_par_iter()
        .map(|i| {
            let mut rng = child_rng(seed, i as u64);
            let z = random_unit_vector(6, &mut rng);
            let c = (0..3).max_by(|&a, &b| (z[a].hypot(z[a + 3])).total_cmp(&z[b].hypot(z[b + 3]))).unwrap_or(0);
            let chart = NormalizedChart::new(vec![cp2_affine_block(&z, c)?]);
            let metric = QuotientMetric { chart: &chart, ambient: &Euclidean, vertical: &hopf_vertical6 };
            let zero = DVector::zeros(4);
            let curv = curvature(&metric, &zero, DEFAULT_STEP)?;
            let count = per.min(planes - (i * per).min(planes));
            let mut worst: f64 = 0.0;
            for _ in 0..count {
                let (xi, eta) = (random_coords(4, &mut rng), random_coords(4, &mut rng));
                let sec = sectional(&curv, &xi, &eta)?;
                let (x, y) = (metric.horizontal_lift(&zero, &xi)?, metric.horizontal_lift(&zero, &eta)?);
                worst = worst.max((sec - fubini_study(&x, &y)).abs());
            }
            Ok(worst)
        })
        .collect::<Result<_, ScenarioError>>()?;
    let err = errs.into_iter().fold(0.0, f64::max);
    Ok(ScenarioResult {
        scenario: "hopf-cp2".into(),
        params: params([("planes", planes.into()), ("points", POINTS.into())]),
        seed,
        criteria: vec![Criterion::close("max |sec - (1 + 3<x,iy>^2)|", 0.0, err, 1e-3)],
        wall_ms: elapsed_ms(start),
    })
}

/// Product `S³ × S⁵`: the smallest 6-sum is 1 and the smallest 5-sum is 0.
pub fn run_product_s3s5(samples: usize, seed: u64) -> Result<ScenarioResult, ScenarioError> {
    check_samples(samples, 1)?;
    let start = Instant::now();
    let mut rng = child_rng(seed, 0);
    let pt = s3s5::random_point(&mut rng);
    let chart = SphereProductChart::new(&pt, &s3s5::SPHERE_DIMS);
    let metric = PulledBack { chart: &chart, ambient: &Euclidean };
    let curv = curvature(&metric, &DVector::zeros(chart.dim()), DEFAULT_STEP)?;
    let r6 = ric_k_min_at(&curv, 6, samples, seed, None)?;
    let r5 = ric_k_min_at(&curv, 5, samples, seed, None)?;
    Ok(ScenarioResult {
        scenario: "product-s3s5".into(),
        params: params([("samples", samples.into()), ("point", Value::from(pt.as_slice().to_vec()))]),
        seed,
        criteria: vec![
            Criterion::within("min 6-sum", 0.99, 1.01, r6.min_ksum),
            Criterion::within("min 5-sum", -1e-3, 1e-3, r5.min_ksum),
            Criterion::at_most("symmetry defect", 1e-4, curv.defect),
        ],
        wall_ms: elapsed_ms(start),
    })
}
