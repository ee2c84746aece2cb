//! Parallel frames, Jacobi fields and the Riccati operator along a curve.
//!
//! Frames are carried as ambient vectors; every step is taken in a graph chart
//! re-based at the current point, so the chart never leaves its domain.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::chart::{AmbientMetric, Chart, PulledBack, SphereProductChart};
use super::curvature::{christoffel, curvature, Christoffel};
use super::GeometryError;

/// A product of round-sphere factors embedded in ℝᴺ with some ambient metric.
pub struct SphereProductSpace<'a, A: AmbientMetric> {
    pub sphere_dims: Vec<usize>,
    pub ambient: &'a A,
    pub h: f64,
}

impl<'a, A: AmbientMetric> SphereProductSpace<'a, A> {
    pub fn new(sphere_dims: &[usize], ambient: &'a A) -> Self {
        Self { sphere_dims: sphere_dims.to_vec(), ambient, h: super::curvature::DEFAULT_STEP }
    }

    pub fn dim(&self) -> usize {
        self.sphere_dims.iter().sum()
    }

    pub fn chart_at(&self, p: &DVector<f64>) -> SphereProductChart {
        SphereProductChart::new(p, &self.sphere_dims)
    }

    /// Gram matrix of ambient tangent vectors at `p`.
    pub fn gram(&self, p: &DVector<f64>, vs: &DMatrix<f64>) -> DMatrix<f64> {
        let g = self.ambient.gram_of(p, vs);
        (&g + g.transpose()) * 0.5
    }
}

/// A curve `t ↦ (γ(t), γ'(t))` in ambient coordinates.
pub trait Curve: Sync {
    fn at(&self, t: f64) -> (DVector<f64>, DVector<f64>);
}

impl<F: Fn(f64) -> (DVector<f64>, DVector<f64>) + Sync> Curve for F {
    fn at(&self, t: f64) -> (DVector<f64>, DVector<f64>) {
        self(t)
    }
}

/// Chart position, velocity and tangent frame.
type LocalState = (DVector<f64>, DVector<f64>, DMatrix<f64>);

/// Ambient frame columns at each grid time.
#[derive(Clone, Debug)]
pub struct ParallelFrame {
    pub ts: Vec<f64>,
    pub frames: Vec<DMatrix<f64>>,
}

fn gamma_apply(g: &Christoffel, x: &DVector<f64>, vs: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(vs.nrows(), vs.ncols());
    for c in 0..vs.ncols() {
        out.set_column(c, &g.apply(x, &vs.column(c).into_owned()));
    }
    out
}

/// Transports the columns of `initial` (ambient vectors at `γ(t0)`) with classical RK4
/// on a uniform grid of `steps` steps.
pub fn parallel_frame<A: AmbientMetric, C: Curve>(
    space: &SphereProductSpace<A>,
    curve: &C,
    initial: &DMatrix<f64>,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<ParallelFrame, GeometryError> {
    if steps == 0 {
        return Err(GeometryError::BadInput("zero steps".into()));
    }
    let dt = (t1 - t0) / steps as f64;
    let mut ts = vec![t0];
    let mut frames = vec![initial.clone()];
    let mut current = initial.clone();
    for n in 0..steps {
        let t = t0 + n as f64 * dt;
        let (p, _) = curve.at(t);
        let chart = space.chart_at(&p);
        let metric = PulledBack { chart: &chart, ambient: space.ambient };
        let local = |s: f64| -> Result<LocalState, GeometryError> {
            let (q, v) = curve.at(s);
            let u = chart.inverse(&q);
            let du = chart.inverse_differential(&v);
            let tan = chart.tangents(&u);
            Ok((u, du, tan))
        };
        let (u0, du0, _) = local(t)?;
        let (um, dum, _) = local(t + 0.5 * dt)?;
        let (u1, du1, tan1) = local(t + dt)?;
        let g0 = christoffel(&metric, &u0, space.h)?;
        let gm = christoffel(&metric, &um, space.h)?;
        let g1 = christoffel(&metric, &u1, space.h)?;
        let mut xi = DMatrix::zeros(chart.dim(), current.ncols());
        for c in 0..current.ncols() {
            xi.set_column(c, &chart.coords_of(&u0, &current.column(c).into_owned()));
        }
        let k1 = -gamma_apply(&g0, &du0, &xi);
        let k2 = -gamma_apply(&gm, &dum, &(&xi + &k1 * (0.5 * dt)));
        let k3 = -gamma_apply(&gm, &dum, &(&xi + &k2 * (0.5 * dt)));
        let k4 = -gamma_apply(&g1, &du1, &(&xi + &k3 * dt));
        let next = &xi + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        current = &tan1 * next;
        ts.push(t + dt);
        frames.push(current.clone());
    }
    Ok(ParallelFrame { ts, frames })
}

/// Matrices `K_ij(t) = R(E_i, γ', γ', E_j)` in the transported frame at every grid time.
pub fn curvature_along<A: AmbientMetric, C: Curve>(
    space: &SphereProductSpace<A>,
    curve: &C,
    frame: &ParallelFrame,
) -> Result<Vec<DMatrix<f64>>, GeometryError> {
    frame
        .ts
        .par_iter()
        .zip(frame.frames.par_iter())
        .map(|(&t, e)| {
            let (p, v) = curve.at(t);
            let chart = space.chart_at(&p);
            let metric = PulledBack { chart: &chart, ambient: space.ambient };
            let zero = DVector::zeros(chart.dim());
            let curv = curvature(&metric, &zero, space.h)?;
            let x = chart.coords_of(&zero, &v);
            let km = curv.jacobi_matrix(&x);
            let mut ec = DMatrix::zeros(chart.dim(), e.ncols());
            for c in 0..e.ncols() {
                ec.set_column(c, &chart.coords_of(&zero, &e.column(c).into_owned()));
            }
            let k = ec.transpose() * km * ec;
            Ok((&k + k.transpose()) * 0.5)
        })
        .collect()
}

/// `J(t)` and `J'(t)` in parallel-frame coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiState {
    pub t: f64,
    pub j: DVector<f64>,
    pub dj: DVector<f64>,
}

/// The linear system `f'' + K(t) f = 0` sampled on a uniform grid of spacing `delta`.
#[derive(Clone, Debug)]
pub struct JacobiSystem {
    pub t0: f64,
    pub delta: f64,
    pub k: Vec<DMatrix<f64>>,
}

/// Richardson tolerance between the `dt` and `2 dt` solutions.
pub const JACOBI_TOL: f64 = 1e-6;

impl JacobiSystem {
    pub fn new(t0: f64, delta: f64, k: Vec<DMatrix<f64>>) -> Self {
        Self { t0, delta, k }
    }

    pub fn from_frame(frame: &ParallelFrame, k: Vec<DMatrix<f64>>) -> Self {
        let delta = if frame.ts.len() > 1 { frame.ts[1] - frame.ts[0] } else { 0.0 };
        Self { t0: frame.ts[0], delta, k }
    }

    /// RK4 with step `2·stride·delta`, so the midpoint lands on the grid.
    /// Returns states at every step.
    pub fn integrate_with_stride(&self, j0: &DVector<f64>, dj0: &DVector<f64>, stride: usize) -> Vec<JacobiState> {
        let n = j0.len();
        let step = 2 * stride;
        let dt = step as f64 * self.delta;
        let mut f = j0.clone();
        let mut g = dj0.clone();
        let mut out = vec![JacobiState { t: self.t0, j: f.clone(), dj: g.clone() }];
        let mut idx = 0;
        while idx + step < self.k.len() {
            let (ka, km, kb) = (&self.k[idx], &self.k[idx + stride], &self.k[idx + step]);
            let acc = |k: &DMatrix<f64>, f: &DVector<f64>| -(k * f);
            let (f1, g1) = (g.clone(), acc(ka, &f));
            let (f2, g2) = (&g + &g1 * (0.5 * dt), acc(km, &(&f + &f1 * (0.5 * dt))));
            let (f3, g3) = (&g + &g2 * (0.5 * dt), acc(km, &(&f + &f2 * (0.5 * dt))));
            let (f4, g4) = (&g + &g3 * dt, acc(kb, &(&f + &f3 * dt)));
            f += (f1 + f2 * 2.0 + f3 * 2.0 + f4) * (dt / 6.0);
            g += (g1 + g2 * 2.0 + g3 * 2.0 + g4) * (dt / 6.0);
            idx += step;
            debug_assert_eq!(f.len(), n);
            out.push(JacobiState { t: self.t0 + idx as f64 * self.delta, j: f.clone(), dj: g.clone() });
        }
        out
    }
}

/// Integrates with step `2 delta` and checks it against step `4 delta`
/// (Richardson estimate `|f_dt − f_2dt| / 15` at common times).
pub fn jacobi_integrate(
    system: &JacobiSystem,
    j0: &DVector<f64>,
    dj0: &DVector<f64>,
    tol: f64,
) -> Result<(Vec<JacobiState>, f64), GeometryError> {
    let fine = system.integrate_with_stride(j0, dj0, 1);
    let coarse = system.integrate_with_stride(j0, dj0, 2);
    let mut estimate: f64 = 0.0;
    for (i, c) in coarse.iter().enumerate() {
        let f = &fine[2 * i];
        estimate = estimate.max((&f.j - &c.j).amax() / 15.0).max((&f.dj - &c.dj).amax() / 15.0);
    }
    if !estimate.is_finite() || estimate > tol {
        return Err(GeometryError::StepTooLarge { estimate });
    }
    Ok((fine, estimate))
}

/// Riccati operator `S` with `S J = J'` (columns are fields, rows frame coordinates)
/// and the symplectic matrix `ω_ab = ⟨J_a', J_b⟩ − ⟨J_a, J_b'⟩`. `S` is `None` when
/// the fields do not span.
pub fn riccati_and_omega(j: &DMatrix<f64>, dj: &DMatrix<f64>) -> (Option<DMatrix<f64>>, DMatrix<f64>) {
    let omega = dj.transpose() * j - j.transpose() * dj;
    let n = j.nrows();
    let sv = j.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if j.ncols() < n || smax == 0.0 || smin < 1e-8 * smax {
        return (None, omega);
    }
    // S = J' J⁺ with J of full row rank
    let jjt = j * j.transpose();
    let s = jjt.try_inverse().map(|inv| dj * j.transpose() * inv);
    (s, omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::chart::Euclidean;

    fn great_circle(t: f64) -> (DVector<f64>, DVector<f64>) {
        (DVector::from_vec(vec![t.cos(), t.sin(), 0.0, 0.0]), DVector::from_vec(vec![-t.sin(), t.cos(), 0.0, 0.0]))
    }

    fn s3_system(steps: usize) -> (ParallelFrame, JacobiSystem) {
        let space = SphereProductSpace::new(&[3], &Euclidean);
        let init = DMatrix::from_columns(&[
            DVector::from_vec(vec![0.0, 1.0, 0.0, 0.0]),
            DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0]),
            DVector::from_vec(vec![0.0, 0.0, 0.0, 1.0]),
        ]);
        let frame = parallel_frame(&space, &great_circle, &init, 0.0, 2.0, steps).unwrap();
        let k = curvature_along(&space, &great_circle, &frame).unwrap();
        let sys = JacobiSystem::from_frame(&frame, k);
        (frame, sys)
    }

    #[test]
    fn transport_along_great_circle() {
        let (frame, _) = s3_system(200);
        let last = frame.frames.last().unwrap();
        let t = *frame.ts.last().unwrap();
        let (_, v) = great_circle(t);
        assert!((last.column(0) - v).norm() < 1e-8);
        assert!((last.column(1) - DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0])).norm() < 1e-8);
    }

    #[test]
    fn round_s3_jacobi_is_sine() {
        let (_, sys) = s3_system(400);
        let j0 = DVector::from_vec(vec![0.0, 0.0, 0.0]);
        let dj0 = DVector::from_vec(vec![0.0, 1.0, 0.0]);
        let (states, est) = jacobi_integrate(&sys, &j0, &dj0, JACOBI_TOL).unwrap();
        assert!(est < 1e-8);
        for s in &states {
            assert!((s.j.norm() - s.t.sin()).abs() < 1e-5, "t = {}", s.t);
            // tangential field stays linear
            assert!(s.j[0].abs() < 1e-12);
        }
        // Riccati of the family sin t · e_a on γ'^⊥ is cot t
        let fam: Vec<(DVector<f64>, DVector<f64>)> = (1..3)
            .map(|a| {
                let mut d = DVector::zeros(3);
                d[a] = 1.0;
                let (st, _) = jacobi_integrate(&sys, &j0, &d, JACOBI_TOL).unwrap();
                let s = &st[st.len() / 2];
                (s.j.rows(1, 2).into_owned(), s.dj.rows(1, 2).into_owned())
            })
            .collect();
        let t = states[states.len() / 2].t;
        let jm = DMatrix::from_columns(&fam.iter().map(|x| x.0.clone()).collect::<Vec<_>>());
        let djm = DMatrix::from_columns(&fam.iter().map(|x| x.1.clone()).collect::<Vec<_>>());
        let (s, w) = riccati_and_omega(&jm, &djm);
        let s = s.unwrap();
        assert!((s - DMatrix::identity(2, 2) * (t.cos() / t.sin())).amax() < 1e-5);
        assert!(w.amax() < 1e-10);
    }

    #[test]
    fn flat_jacobi_fields_are_linear() {
        let k = vec![DMatrix::zeros(2, 2); 41];
        let sys = JacobiSystem::new(0.0, 0.05, k);
        let j0 = DVector::from_vec(vec![1.0, -2.0]);
        let dj0 = DVector::from_vec(vec![0.5, 0.25]);
        let (states, _) = jacobi_integrate(&sys, &j0, &dj0, JACOBI_TOL).unwrap();
        for s in states {
            assert!((&s.j - (&j0 + &dj0 * s.t)).amax() < 1e-10);
        }
    }

    #[test]
    fn coarse_steps_are_rejected() {
        // f'' + 400 f = 0 with step 0.5 is hopeless
        let k = vec![DMatrix::identity(1, 1) * 400.0; 21];
        let sys = JacobiSystem::new(0.0, 0.25, k);
        let r = jacobi_integrate(&sys, &DVector::from_vec(vec![1.0]), &DVector::zeros(1), JACOBI_TOL);
        assert!(matches!(r, Err(GeometryError::StepTooLarge { .. })));
    }

    #[test]
    fn singular_family_has_no_riccati_operator() {
        let j = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        let (s, _) = riccati_and_omega(&j, &DMatrix::identity(2, 2));
        assert!(s.is_none());
    }
}
