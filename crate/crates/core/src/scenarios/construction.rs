//! The metric on `S³ × ℂP²` from the deformed `S³ × S⁵`, and its further quotient `S² × ℂP²`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};
use std::time::Instant;

use nalgebra::DVector;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{check_l, check_samples, elapsed_ms, params, Criterion, ScenarioError, ScenarioResult};
use crate::geometry::{
    curvature, ric_k_min_at, sectional, Chart, CurvatureAtPoint, GeometryError, PulledBack, SphereProductChart,
    DEFAULT_STEP,
};
use crate::linalg::orthogonal_complement;
use crate::sampling::{child_rng, standard_normal};
use crate::spaces::{
    best_affine_chart, chain_bound, cheeger_s3s5, cp2_chart_for, hopf_vertical, s2cp2_chart, s3cp2_chart, s3s5,
    torus_vertical, y_perp_space, CheegerMetric, QuotientMetric,
};

/// Number of points of the `t` grid on `[0, π/2]`.
pub const T_GRID: usize = 33;
const AUDIT_TS: [f64; 5] = [0.0, FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8, FRAC_PI_2];
const OVERLAP_TS: [f64; 3] = [FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8];
/// Curvature noise floor below which a 3-sum counts as vanishing.
const ZERO_SUM_TOL: f64 = 1e-5;

fn t_at(n: usize, grid: usize) -> f64 {
    if grid == 1 {
        0.0
    } else {
        FRAC_PI_2 * n as f64 / (grid - 1) as f64
    }
}

/// Curvature of `(S³ × S⁵, g_l)` at `γ(t)` and a basis of `ℋ|_t`, the `g_l`-complement
/// of the Hopf direction, in chart coordinates.
fn upstairs(metric_l: &CheegerMetric, t: f64) -> Result<(CurvatureAtPoint, Vec<DVector<f64>>), GeometryError> {
    let pt = s3s5::gamma(t);
    let chart = SphereProductChart::new(&pt, &s3s5::SPHERE_DIMS);
    let metric = PulledBack { chart: &chart, ambient: metric_l };
    let zero = DVector::zeros(chart.dim());
    let curv = curvature(&metric, &zero, DEFAULT_STEP)?;
    let h = chart.coords_of(&zero, &s3s5::hopf_field(&pt));
    let gh = &curv.gram * h;
    Ok((curv, orthogonal_complement(&[gh], chart.dim(), 1e-12)))
}

fn downstairs(metric_l: &CheegerMetric, t: f64, chart_index: usize) -> Result<CurvatureAtPoint, GeometryError> {
    let chart = s3cp2_chart(&s3s5::gamma(t), chart_index)?;
    let metric = QuotientMetric { chart: &chart, ambient: metric_l, vertical: &hopf_vertical };
    curvature(&metric, &DVector::zeros(chart.dim()), DEFAULT_STEP)
}

struct PerT {
    up4: f64,
    down4: f64,
    down3: f64,
    defect: f64,
}

/// `S³ × ℂP²`: upstairs 4-sums on `ℋ|_t`, downstairs 4-sums along the projected geodesic,
/// a search for a vanishing 3-sum, the chart overlap and the zero-plane audit.
pub fn run_construction_s3xcp2(
    l: f64,
    t_grid: usize,
    samples: usize,
    seed: u64,
) -> Result<ScenarioResult, ScenarioError> {
    check_l(l)?;
    check_samples(samples, 1)?;
    if t_grid < 2 {
        return Err(ScenarioError::InvalidOption("t grid needs at least two points".into()));
    }
    let start = Instant::now();
    let metric_l = cheeger_s3s5(l)?;
    let per_t: Vec<PerT> = (0..t_grid)
        .into_par_iter()
        .map(|n| {
            let t = t_at(n, t_grid);
            let s = seed.wrapping_add(n as u64);
            let (up, hor) = upstairs(&metric_l, t)?;
            let up4 = ric_k_min_at(&up, 4, samples, s, Some(&hor))?.min_ksum;
            let down = downstairs(&metric_l, t, cp2_chart_for(t))?;
            let down4 = ric_k_min_at(&down, 4, samples, s, None)?.min_ksum;
            let down3 = ric_k_min_at(&down, 3, samples, s, None)?.min_ksum;
            Ok(PerT { up4, down4, down3, defect: up.defect.max(down.defect) })
        })
        .collect::<Result<_, ScenarioError>>()?;

    let overlap = OVERLAP_TS
        .par_iter()
        .map(|&t| {
            let a = downstairs(&metric_l, t, 0)?.ricci_spectrum()?;
            let b = downstairs(&metric_l, t, 1)?.ricci_spectrum()?;
            Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>, ScenarioError>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let dims: Vec<usize> = AUDIT_TS.iter().map(|&t| y_perp_space(t).len()).collect();
    let chain = (0..t_grid).map(|n| chain_bound(t_at(n, t_grid))).max().unwrap_or(0);

    let min = |f: fn(&PerT) -> f64| per_t.iter().map(f).fold(f64::INFINITY, f64::min);
    let series = |f: fn(&PerT) -> f64| Value::from(per_t.iter().map(f).collect::<Vec<f64>>());
    let up4 = min(|p| p.up4);
    let down4 = min(|p| p.down4);
    let down3 = min(|p| p.down3);
    let defect = per_t.iter().map(|p| p.defect).fold(0.0, f64::max);
    Ok(ScenarioResult {
        scenario: "s3xcp2".into(),
        params: params([("l", l.into()), ("t_grid", t_grid.into()), ("samples", samples.into())]),
        seed,
        criteria: vec![
            Criterion::above("upstairs min 4-sum on H_t", 0.0, up4),
            Criterion::above("downstairs min 4-sum", 0.0, down4),
            Criterion::at_most("downstairs min 3-sum", ZERO_SUM_TOL, down3),
            Criterion::equal(
                "y_perp dimensions at t = 0, pi/8, pi/4, 3pi/8, pi/2",
                json!([2, 1, 2, 1, 2]),
                json!(dims),
            ),
            Criterion::at_most("max zero-plane chain length", 4.0, chain as f64),
            Criterion::close("chart overlap Ricci spectrum difference", 0.0, overlap, 1e-4),
            Criterion::at_most("max symmetry defect", 1e-4, defect),
            Criterion::new(
                "upstairs 4-sum per t",
                "> 0",
                series(|p| p.up4),
                Value::Null,
                per_t.iter().all(|p| p.up4 > 0.0),
            ),
            Criterion::new(
                "downstairs 4-sum per t",
                "> 0",
                series(|p| p.down4),
                Value::Null,
                per_t.iter().all(|p| p.down4 > 0.0),
            ),
        ],
        wall_ms: elapsed_ms(start),
    })
}

const S2_POINTS: usize = 16;
const PLANES_PER_POINT: usize = 8;

fn s2cp2_point(i: usize, seed: u64) -> DVector<f64> {
    let half = S2_POINTS / 2;
    if i < half {
        s3s5::gamma(FRAC_PI_2 * (i as f64 + 0.5) / half as f64)
    } else {
        s3s5::random_point(&mut child_rng(seed, i as u64))
    }
}

/// `S² × ℂP²` as the quotient by the Hopf circle and the left circle on `S³`.
pub fn run_s2xcp2(l: f64, samples: usize, seed: u64) -> Result<ScenarioResult, ScenarioError> {
    check_l(l)?;
    check_samples(samples, S2_POINTS)?;
    let start = Instant::now();
    let metric_l = cheeger_s3s5(l)?;
    let per = samples / S2_POINTS;
    let results: Vec<(f64, f64, f64)> = (0..S2_POINTS)
        .into_par_iter()
        .map(|i| {
            let pt = s2cp2_point(i, seed);
            let chart = s2cp2_chart(&pt, best_affine_chart(&pt))?;
            let metric = QuotientMetric { chart: &chart, ambient: &metric_l, vertical: &torus_vertical };
            let zero = DVector::zeros(chart.dim());
            let down = curvature(&metric, &zero, DEFAULT_STEP)?;
            let r4 = ric_k_min_at(&down, 4, per, seed.wrapping_add(i as u64), None)?.min_ksum;

            let up_chart = SphereProductChart::new(&pt, &s3s5::SPHERE_DIMS);
            let up_metric = PulledBack { chart: &up_chart, ambient: &metric_l };
            let up_zero = DVector::zeros(up_chart.dim());
            let up = curvature(&up_metric, &up_zero, DEFAULT_STEP)?;
            let mut rng = child_rng(seed ^ 0x5eed, i as u64);
            let mut gap = f64::INFINITY;
            for _ in 0..PLANES_PER_POINT {
                let xi = DVector::from_fn(chart.dim(), |_, _| standard_normal(&mut rng));
                let eta = DVector::from_fn(chart.dim(), |_, _| standard_normal(&mut rng));
                let lx = up_chart.coords_of(&up_zero, &metric.horizontal_lift(&zero, &xi)?);
                let ly = up_chart.coords_of(&up_zero, &metric.horizontal_lift(&zero, &eta)?);
                gap = gap.min(sectional(&down, &xi, &eta)? - sectional(&up, &lx, &ly)?);
            }
            Ok((r4, gap, down.defect.max(up.defect)))
        })
        .collect::<Result<_, ScenarioError>>()?;
    let r4 = results.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let gap = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let defect = results.iter().map(|r| r.2).fold(0.0, f64::max);
    Ok(ScenarioResult {
        scenario: "s2xcp2".into(),
        params: params([("l", l.into()), ("samples", samples.into()), ("points", S2_POINTS.into())]),
        seed,
        criteria: vec![
            Criterion::above("min 4-sum", 0.0, r4),
            Criterion::new(
                "min (downstairs sec - upstairs sec) on horizontal planes",
                ">= -1e-4",
                gap,
                1e-4,
                gap >= -1e-4,
            ),
            Criterion::at_most("max symmetry defect", 1e-4, defect),
        ],
        wall_ms: elapsed_ms(start),
    })
}
