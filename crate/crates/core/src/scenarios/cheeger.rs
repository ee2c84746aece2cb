//! The diagonal Cheeger deformation of `S³ × S³`.

use std::time::Instant;

use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;

use super::{check_l, check_samples, elapsed_ms, params, Criterion, ScenarioError, ScenarioResult};
use crate::geometry::{
    curvature, directional_operator, ksum_min, ric_k_min_at, sectional, Chart, PulledBack, SphereProductChart,
    DEFAULT_STEP,
};
use crate::quat::Quat;
use crate::sampling::{child_rng, random_unit_vector};
use crate::spaces::{cheeger_s3s3, s3s3_point, s3s5::vec_to_quat};

const POINTS: usize = 10;
const ORACLE_SAMPLES: usize = 100;

fn random_imag<R: Rng>(rng: &mut R) -> Quat {
    let v = random_unit_vector(3, rng);
    Quat::imag(v[0], v[1], v[2])
}

/// `min` 2-sum over sampled points and directions, the flat plane probe at `(1, 1)`,
/// and the closed form `g_l((v,v),(v,v)) = 2 l² |v|² / (l² + 2)` at `(1, 1)`.
pub fn run_cheeger_s3s3(l: f64, samples: usize, seed: u64) -> Result<ScenarioResult, ScenarioError> {
    check_l(l)?;
    check_samples(samples, POINTS)?;
    let start = Instant::now();
    let metric_l = cheeger_s3s3(l)?;
    let per = samples / POINTS;
    let mins: Vec<(f64, f64)> = (0..POINTS)
        .into_par_iter()
        .map(|i| {
            let mut rng = child_rng(seed, i as u64);
            let p = vec_to_quat(&random_unit_vector(4, &mut rng), 0);
            let q = vec_to_quat(&random_unit_vector(4, &mut rng), 0);
            let pt = s3s3_point(p, q);
            let chart = SphereProductChart::new(&pt, &[3, 3]);
            let metric = PulledBack { chart: &chart, ambient: &metric_l };
            let curv = curvature(&metric, &DVector::zeros(6), DEFAULT_STEP)?;
            let r = ric_k_min_at(&curv, 2, per, seed.wrapping_add(i as u64), None)?;
            Ok((r.min_ksum, curv.defect))
        })
        .collect::<Result<_, ScenarioError>>()?;
    let min2 = mins.iter().map(|m| m.0).fold(f64::INFINITY, f64::min);
    let defect = mins.iter().map(|m| m.1).fold(0.0, f64::max);

    // flat plane C_l Span{(x,0),(0,x)} at (1,1)
    let mut rng = child_rng(seed, POINTS as u64);
    let pt = s3s3_point(Quat::ONE, Quat::ONE);
    let chart = SphereProductChart::new(&pt, &[3, 3]);
    let zero = DVector::zeros(6);
    let tan = chart.tangents(&zero);
    let metric = PulledBack { chart: &chart, ambient: &metric_l };
    let curv = curvature(&metric, &zero, DEFAULT_STEP)?;
    let c_op = metric_l.c_operator(&pt, &tan)?;
    let x = random_imag(&mut rng);
    let a = chart.coords_of(&zero, &s3s3_point(x, Quat::ZERO));
    let b = chart.coords_of(&zero, &s3s3_point(Quat::ZERO, x));
    let (ca, cb) = (&c_op * &a, &c_op * &b);
    let probe = sectional(&curv, &ca, &cb)?;
    // Ric₁ at C_l(x,0) is at most the probe's curvature
    let ric1_probe = ksum_min(&directional_operator(&curv, &ca, None)?, 1);
    let ric1_search = ric_k_min_at(&curv, 1, per, seed, None)?.min_ksum;
    let ric1 = ric1_probe.min(ric1_search);

    let mut worst: f64 = 0.0;
    for _ in 0..ORACLE_SAMPLES {
        let lv: f64 = rng.random_range(0.1..5.0);
        let v = random_imag(&mut rng).scale(rng.random_range(0.2..2.0));
        let m = cheeger_s3s3(lv)?;
        let xv = s3s3_point(v, v);
        let want = 2.0 * lv * lv * v.norm_sqr() / (lv * lv + 2.0);
        worst = worst.max((m.eval(&pt, &xv, &xv) - want).abs());
    }

    Ok(ScenarioResult {
        scenario: "cheeger-s3s3".into(),
        params: params([("l", l.into()), ("samples", samples.into()), ("points", POINTS.into())]),
        seed,
        criteria: vec![
            Criterion::above("min 2-sum", 0.0, min2),
            Criterion::close("flat plane probe sec", 0.0, probe, 1e-4),
            Criterion::at_most("min 1-sum", 1e-4, ric1),
            Criterion::close("closed form g_l((v,v),(v,v))", 0.0, worst, 1e-8),
            Criterion::at_most("max symmetry defect", 1e-4, defect),
        ],
        wall_ms: elapsed_ms(start),
    })
}
