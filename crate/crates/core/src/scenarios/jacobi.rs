//! Jacobi and Riccati audit along `γ(t) = (1, (cos t, i sin t, 0))` in `S³ × S⁵`.

use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde_json::Value;

use super::{check_l, elapsed_ms, params, Criterion, ScenarioError, ScenarioResult};
use crate::geometry::{
    christoffel, curvature_along, jacobi_integrate, parallel_frame, riccati_and_omega, AmbientMetric, Chart, Euclidean,
    GeometryError, JacobiSystem, PulledBack, SphereProductSpace, JACOBI_TOL,
};
use crate::linalg::gram_orthonormal_basis;
use crate::spaces::{cheeger_s3s5, s3s5};

/// Grid intervals on `[0, π/2]`; the RK4 step is two intervals.
const GRID: usize = 800;
const FD_STEP: f64 = 1e-3;
/// Fraction of the interval dropped at each end when checking the Riccati operator.
const EDGE: f64 = 0.05;
/// Times where the fields are this close to dependent are treated as singular.
const MAX_COND: f64 = 1e4;

/// Fields of the `S³ × S³ × S¹` action at `pt`.
fn action_fields(pt: &DVector<f64>) -> Vec<DVector<f64>> {
    s3s5::lambda_generators().into_iter().map(|(u, v, c)| s3s5::action_field(u, v, c, pt)).collect()
}

/// Initial frame at `γ(0)`: the unit velocity first, then a Gram-orthonormal completion.
fn initial_frame<A: AmbientMetric>(space: &SphereProductSpace<A>) -> Result<DMatrix<f64>, GeometryError> {
    let (p, v) = s3s5::gamma_curve(0.0);
    let chart = space.chart_at(&p);
    let metric = PulledBack { chart: &chart, ambient: space.ambient };
    let zero = DVector::zeros(chart.dim());
    let g = crate::geometry::MetricField::gram(&metric, &zero);
    let mut vs = vec![chart.coords_of(&zero, &v)];
    vs.extend((0..chart.dim()).map(|i| DVector::from_fn(chart.dim(), |r, _| if r == i { 1.0 } else { 0.0 })));
    let basis = gram_orthonormal_basis(&vs, &g, 1e-10);
    if basis.len() != chart.dim() {
        return Err(GeometryError::SingularGram("initial frame".into()));
    }
    let tan = chart.tangents(&zero);
    Ok(DMatrix::from_columns(&basis.iter().map(|b| &tan * b).collect::<Vec<_>>()))
}

/// `(f, f')` in frame coordinates.
type FieldData = (DVector<f64>, DVector<f64>);

/// `(f, f')` at `t = 0` for every action field: frame coordinates of `J` and `∇_{γ'} J`,
/// the derivative taken in the chart at `γ(0)` as `ξ' + Γ(u', ξ)`.
fn initial_data<A: AmbientMetric>(
    space: &SphereProductSpace<A>,
    frame0: &DMatrix<f64>,
) -> Result<Vec<FieldData>, GeometryError> {
    let (p, v) = s3s5::gamma_curve(0.0);
    let chart = space.chart_at(&p);
    let metric = PulledBack { chart: &chart, ambient: space.ambient };
    let zero = DVector::zeros(chart.dim());
    let g = crate::geometry::MetricField::gram(&metric, &zero);
    let gamma = christoffel(&metric, &zero, space.h)?;
    let du = chart.coords_of(&zero, &v);
    let e: Vec<DVector<f64>> = frame0.column_iter().map(|c| chart.coords_of(&zero, &c.into_owned())).collect();
    let xi_at = |s: f64| -> Vec<DVector<f64>> {
        let q = s3s5::gamma(s);
        let u = chart.inverse(&q);
        action_fields(&q).iter().map(|x| chart.coords_of(&u, x)).collect()
    };
    let xi0 = xi_at(0.0);
    let (m2, m1, p1, p2) = (xi_at(-2.0 * FD_STEP), xi_at(-FD_STEP), xi_at(FD_STEP), xi_at(2.0 * FD_STEP));
    let frame_coords =
        |w: &DVector<f64>| DVector::from_iterator(e.len(), e.iter().map(|ei| (ei.transpose() * &g * w)[(0, 0)]));
    Ok((0..xi0.len())
        .map(|a| {
            let dxi = (&m2[a] - &m1[a] * 8.0 + &p1[a] * 8.0 - &p2[a]) / (12.0 * FD_STEP);
            let cov = dxi + gamma.apply(&du, &xi0[a]);
            (frame_coords(&xi0[a]), frame_coords(&cov))
        })
        .collect())
}

/// Direct frame coordinates `g(J_a(t), E_i(t))` on the grid, one matrix (frame × field) per time.
fn direct_fields<A: AmbientMetric>(
    space: &SphereProductSpace<A>,
    ts: &[f64],
    frames: &[DMatrix<f64>],
) -> Vec<DMatrix<f64>> {
    ts.par_iter()
        .zip(frames.par_iter())
        .map(|(&t, e)| {
            let p = s3s5::gamma(t);
            let fields = action_fields(&p);
            let mut cols: Vec<DVector<f64>> = e.column_iter().map(|c| c.into_owned()).collect();
            let n = cols.len();
            cols.extend(fields);
            let g = space.gram(&p, &DMatrix::from_columns(&cols));
            g.view((0, n), (n, cols.len() - n)).into_owned()
        })
        .collect()
}

fn audit<A: AmbientMetric>(space: &SphereProductSpace<A>) -> Result<Audit, ScenarioError> {
    let frame0 = initial_frame(space)?;
    let frame = parallel_frame(space, &s3s5::gamma_curve, &frame0, 0.0, FRAC_PI_2, GRID)?;
    let k = curvature_along(space, &s3s5::gamma_curve, &frame)?;
    let system = JacobiSystem::from_frame(&frame, k);
    let direct = direct_fields(space, &frame.ts, &frame.frames);

    let mut estimate: f64 = 0.0;
    let mut states = Vec::new();
    for (j0, dj0) in initial_data(space, &frame0)? {
        let (s, est) = jacobi_integrate(&system, &j0, &dj0, JACOBI_TOL)?;
        estimate = estimate.max(est);
        states.push(s);
    }
    let steps = states[0].len();
    let n = frame0.ncols();
    let mut residual: f64 = 0.0;
    let mut omega_max: f64 = 0.0;
    let mut sym_max: f64 = 0.0;
    let mut regular = 0usize;
    let t_end = FRAC_PI_2;
    for i in 0..steps {
        let j = DMatrix::from_columns(&states.iter().map(|s| s[i].j.clone()).collect::<Vec<_>>());
        let dj = DMatrix::from_columns(&states.iter().map(|s| s[i].dj.clone()).collect::<Vec<_>>());
        residual = residual.max((&j - &direct[2 * i]).amax());
        let (_, omega) = riccati_and_omega(&j, &dj);
        omega_max = omega_max.max(omega.amax());

        let t = states[0][i].t;
        if t < EDGE * t_end || t > (1.0 - EDGE) * t_end {
            continue;
        }
        // the velocity row is identically zero for horizontal fields
        let jr = j.rows(1, n - 1).into_owned();
        let djr = dj.rows(1, n - 1).into_owned();
        let sv = jr.clone().svd(false, false).singular_values;
        let smax = sv.max();
        if sv.min() * MAX_COND < smax {
            continue;
        }
        if let (Some(s), _) = riccati_and_omega(&jr, &djr) {
            sym_max = sym_max.max((&s - s.transpose()).amax());
            regular += 1;
        }
    }
    Ok(Audit { residual, omega_max, sym_max, regular, steps, estimate })
}

struct Audit {
    residual: f64,
    omega_max: f64,
    sym_max: f64,
    regular: usize,
    steps: usize,
    estimate: f64,
}

/// Action fields of `S³ × S³ × S¹` integrated as Jacobi fields along `γ` and compared
/// with direct evaluation; `ω` on the family and symmetry of the Riccati operator.
/// `l = None` uses the product metric, otherwise the Cheeger metric `g_l`.
pub fn run_jacobi_audit(l: Option<f64>, seed: u64) -> Result<ScenarioResult, ScenarioError> {
    let start = Instant::now();
    let a = match l {
        None => audit(&SphereProductSpace::new(&s3s5::SPHERE_DIMS, &Euclidean))?,
        Some(l) => {
            check_l(l)?;
            let metric = cheeger_s3s5(l)?;
            audit(&SphereProductSpace::new(&s3s5::SPHERE_DIMS, &metric))?
        }
    };
    let metric = match l {
        None => Value::from("product"),
        Some(l) => Value::from(l),
    };
    Ok(ScenarioResult {
        scenario: "jacobi".into(),
        params: params([
            ("metric", metric),
            ("grid", GRID.into()),
            ("steps", a.steps.into()),
            ("regular_times", a.regular.into()),
        ]),
        seed,
        criteria: vec![
            Criterion::at_most("action field Jacobi residual", 1e-4, a.residual),
            Criterion::at_most("max |omega|", 1e-8, a.omega_max),
            Criterion::at_most("max Riccati symmetry defect at regular t", 1e-4, a.sym_max),
            Criterion::new("regular times checked", "> 0", a.regular, Value::Null, a.regular > 0),
            Criterion::at_most("Richardson step estimate", JACOBI_TOL, a.estimate),
        ],
        wall_ms: elapsed_ms(start),
    })
}
