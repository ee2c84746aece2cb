//! Coordinate charts and metric fields over them.

use nalgebra::{DMatrix, DVector};

use crate::linalg::orthogonal_complement;

/// A parametrization `u ↦ p(u)` of an open set of a manifold embedded in ℝᴺ.
pub trait Chart: Sync {
    fn dim(&self) -> usize;
    fn ambient_dim(&self) -> usize;
    fn point(&self, u: &DVector<f64>) -> DVector<f64>;
    /// Columns `∂_a p(u)`.
    fn tangents(&self, u: &DVector<f64>) -> DMatrix<f64>;

    /// Coordinates of an ambient tangent vector at `p(u)` (least squares).
    fn coords_of(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        let t = self.tangents(u);
        let tt = t.transpose();
        (&tt * &t).lu().solve(&(&tt * v)).expect("chart differential has full rank")
    }
}

/// Smooth field of Gram matrices over chart coordinates.
pub trait MetricField: Sync {
    fn dim(&self) -> usize;
    fn gram(&self, u: &DVector<f64>) -> DMatrix<f64>;
}

/// Inner products on ambient tangent vectors at a point.
pub trait AmbientMetric: Sync {
    /// Gram matrix of the columns of `vs`, tangent at `p`.
    fn gram_of(&self, p: &DVector<f64>, vs: &DMatrix<f64>) -> DMatrix<f64>;

    fn inner(&self, p: &DVector<f64>, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let vs = DMatrix::from_columns(&[x.clone(), y.clone()]);
        self.gram_of(p, &vs)[(0, 1)]
    }
}

/// The metric induced from the Euclidean inner product of the ambient space.
#[derive(Clone, Copy, Debug, Default)]
pub struct Euclidean;

impl AmbientMetric for Euclidean {
    fn gram_of(&self, _p: &DVector<f64>, vs: &DMatrix<f64>) -> DMatrix<f64> {
        vs.transpose() * vs
    }
}

/// `g(u) = G(p(u))(∂_a p, ∂_b p)`.
pub struct PulledBack<'a, C: Chart, A: AmbientMetric> {
    pub chart: &'a C,
    pub ambient: &'a A,
}

impl<C: Chart, A: AmbientMetric> MetricField for PulledBack<'_, C, A> {
    fn dim(&self) -> usize {
        self.chart.dim()
    }

    fn gram(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let g = self.ambient.gram_of(&self.chart.point(u), &self.chart.tangents(u));
        (&g + g.transpose()) * 0.5
    }
}

/// A metric field given by a closure.
pub struct FnMetric<F: Fn(&DVector<f64>) -> DMatrix<f64> + Sync> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&DVector<f64>) -> DMatrix<f64> + Sync> MetricField for FnMetric<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn gram(&self, u: &DVector<f64>) -> DMatrix<f64> {
        (self.f)(u)
    }
}

/// Identity chart of ℝᵐ.
#[derive(Clone, Copy, Debug)]
pub struct FlatChart(pub usize);

impl Chart for FlatChart {
    fn dim(&self) -> usize {
        self.0
    }

    fn ambient_dim(&self) -> usize {
        self.0
    }

    fn point(&self, u: &DVector<f64>) -> DVector<f64> {
        u.clone()
    }

    fn tangents(&self, _u: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::identity(self.0, self.0)
    }

    fn coords_of(&self, _u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        v.clone()
    }
}

#[derive(Clone, Debug)]
struct SphereBlock {
    base: DVector<f64>,
    frame: DMatrix<f64>,
    amb: usize,
    coord: usize,
}

/// Graph chart on `S^{n₁} × … × S^{n_r}` around a base point: on each factor
/// `p(u) = √(1 − |u|²) b + E u` with `E` an orthonormal basis of `b^⊥`.
#[derive(Clone, Debug)]
pub struct SphereProductChart {
    blocks: Vec<SphereBlock>,
    dim: usize,
    ambient: usize,
}

impl SphereProductChart {
    /// Frames are chosen as the SVD basis of each `b^⊥`.
    pub fn new(base: &DVector<f64>, sphere_dims: &[usize]) -> Self {
        let mut frames = Vec::new();
        let mut amb = 0;
        for &n in sphere_dims {
            let b = base.rows(amb, n + 1).into_owned();
            let comp = orthogonal_complement(&[b], n + 1, 1e-12);
            frames.push(DMatrix::from_columns(&comp));
            amb += n + 1;
        }
        Self::with_frames(base, sphere_dims, frames)
    }

    pub fn with_frames(base: &DVector<f64>, sphere_dims: &[usize], frames: Vec<DMatrix<f64>>) -> Self {
        let mut blocks = Vec::new();
        let (mut amb, mut coord) = (0, 0);
        for (&n, frame) in sphere_dims.iter().zip(frames) {
            assert_eq!(frame.shape(), (n + 1, n), "frame shape for S^{n}");
            let b = base.rows(amb, n + 1).into_owned();
            assert!((b.norm() - 1.0).abs() < 1e-9, "base point off the sphere");
            blocks.push(SphereBlock { base: b, frame, amb, coord });
            amb += n + 1;
            coord += n;
        }
        Self { blocks, dim: coord, ambient: amb }
    }

    /// Inverse on the chart domain: `u = Eᵀ p` factorwise.
    pub fn inverse(&self, p: &DVector<f64>) -> DVector<f64> {
        let mut u = DVector::zeros(self.dim);
        for b in &self.blocks {
            let n = b.frame.ncols();
            u.rows_mut(b.coord, n).copy_from(&(b.frame.transpose() * p.rows(b.amb, n + 1)));
        }
        u
    }

    /// Coordinate velocity of an ambient velocity (the inverse is linear).
    pub fn inverse_differential(&self, v: &DVector<f64>) -> DVector<f64> {
        self.inverse(v)
    }

    pub fn base(&self) -> DVector<f64> {
        self.point(&DVector::zeros(self.dim))
    }
}

impl Chart for SphereProductChart {
    fn dim(&self) -> usize {
        self.dim
    }

    fn ambient_dim(&self) -> usize {
        self.ambient
    }

    fn point(&self, u: &DVector<f64>) -> DVector<f64> {
        let mut p = DVector::zeros(self.ambient);
        for b in &self.blocks {
            let n = b.frame.ncols();
            let uf = u.rows(b.coord, n);
            let s = (1.0 - uf.norm_squared()).sqrt();
            p.rows_mut(b.amb, n + 1).copy_from(&(&b.base * s + &b.frame * uf));
        }
        p
    }

    fn tangents(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let mut t = DMatrix::zeros(self.ambient, self.dim);
        for b in &self.blocks {
            let n = b.frame.ncols();
            let uf = u.rows(b.coord, n);
            let s = (1.0 - uf.norm_squared()).sqrt();
            for a in 0..n {
                let col = b.frame.column(a) - &b.base * (uf[a] / s);
                t.view_mut((b.amb, b.coord + a), (n + 1, 1)).copy_from(&col);
            }
        }
        t
    }

    fn coords_of(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        if u.iter().all(|x| *x == 0.0) {
            return self.inverse(v);
        }
        let t = self.tangents(u);
        let tt = t.transpose();
        (&tt * &t).lu().solve(&(&tt * v)).expect("chart differential has full rank")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differential_at_origin_is_the_frame() {
        let base = DVector::from_vec(vec![0.6, 0.8, 0.0, 0.0, 0.0, 1.0]);
        let c = SphereProductChart::new(&base, &[2, 2]);
        let h = 1e-6;
        let zero = DVector::zeros(4);
        assert!((c.point(&zero) - &base).norm() < 1e-15);
        let t = c.tangents(&zero);
        for a in 0..4 {
            let mut e = zero.clone();
            e[a] = h;
            let fd = (c.point(&e) - c.point(&(-&e))) / (2.0 * h);
            assert!((fd - t.column(a)).norm() < 1e-8);
        }
    }

    #[test]
    fn tangents_match_finite_differences_off_origin() {
        let base = DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0]);
        let c = SphereProductChart::new(&base, &[3]);
        let u = DVector::from_vec(vec![0.2, -0.1, 0.3]);
        let t = c.tangents(&u);
        let h = 1e-6;
        for a in 0..3 {
            let mut e = DVector::zeros(3);
            e[a] = h;
            let fd = (c.point(&(&u + &e)) - c.point(&(&u - &e))) / (2.0 * h);
            assert!((fd - t.column(a)).norm() < 1e-8);
        }
        assert!((c.point(&u).norm() - 1.0).abs() < 1e-14);
        assert!((c.inverse(&c.point(&u)) - &u).norm() < 1e-14);
        let v = t.column(1).into_owned();
        assert!((c.coords_of(&u, &v) - DVector::from_vec(vec![0.0, 1.0, 0.0])).norm() < 1e-12);
    }
}
