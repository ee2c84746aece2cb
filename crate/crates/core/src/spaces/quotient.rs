//! Metrics on orbit spaces of free isometric actions, computed on local sections.
//!
//! A chart of the quotient is a local section `σ` transverse to the fibres. Since
//! `π ∘ σ` is the chart, `∂_a` lifts to the horizontal part of `σ_* ∂_a`, and the
//! quotient Gram matrix is the Schur complement of the vertical block.

use nalgebra::{Complex, DMatrix, DVector};

use crate::geometry::{AmbientMetric, Chart, GeometryError, MetricField};
use crate::linalg::orthogonal_complement;

use super::s3s5::{c3_to_r6, r6_to_c3};

#[derive(Clone, Debug)]
struct Block {
    base: DVector<f64>,
    frame: DMatrix<f64>,
    amb: usize,
    coord: usize,
}

/// Product of sections `u ↦ (b + E u) / |b + E u|`, one per sphere factor.
/// `b` need not be unit; `E` may have fewer columns than the factor dimension.
#[derive(Clone, Debug)]
pub struct NormalizedChart {
    blocks: Vec<Block>,
    dim: usize,
    ambient: usize,
}

impl NormalizedChart {
    /// Blocks `(b, E)` laid out consecutively in the ambient space.
    pub fn new(blocks: Vec<(DVector<f64>, DMatrix<f64>)>) -> Self {
        let (mut amb, mut coord) = (0, 0);
        let mut out = Vec::new();
        for (base, frame) in blocks {
            assert_eq!(base.len(), frame.nrows(), "frame rows must match the factor");
            let n = base.len();
            let m = frame.ncols();
            out.push(Block { base, frame, amb, coord });
            amb += n;
            coord += m;
        }
        Self { blocks: out, dim: coord, ambient: amb }
    }
}

impl Chart for NormalizedChart {
    fn dim(&self) -> usize {
        self.dim
    }

    fn ambient_dim(&self) -> usize {
        self.ambient
    }

    fn point(&self, u: &DVector<f64>) -> DVector<f64> {
        let mut p = DVector::zeros(self.ambient);
        for b in &self.blocks {
            let v = &b.base + &b.frame * u.rows(b.coord, b.frame.ncols());
            let n = v.norm();
            p.rows_mut(b.amb, b.base.len()).copy_from(&(v / n));
        }
        p
    }

    fn tangents(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let mut t = DMatrix::zeros(self.ambient, self.dim);
        for b in &self.blocks {
            let m = b.frame.ncols();
            let v = &b.base + &b.frame * u.rows(b.coord, m);
            let r = v.norm();
            let n = &v / r;
            for a in 0..m {
                let e = b.frame.column(a);
                let col = (e - &n * n.dot(&e)) / r;
                t.view_mut((b.amb, b.coord + a), (b.base.len(), 1)).copy_from(&col);
            }
        }
        t
    }
}

/// Block for a sphere factor whose section is transverse to `vertical` at `p`:
/// the frame spans the complement of `p` and `vertical`.
pub fn transverse_sphere_block(p: &DVector<f64>, vertical: &[DVector<f64>]) -> (DVector<f64>, DMatrix<f64>) {
    let mut span = vec![p.clone()];
    span.extend(vertical.iter().cloned());
    let comp = orthogonal_complement(&span, p.len(), 1e-10);
    (p.clone(), DMatrix::from_columns(&comp))
}

/// Affine chart `[w] ↦ w / w_c` of ℂP² around `[z0]`, realized as the section
/// `Δ ↦ e^{iα}(w₀ + Δ) / |w₀ + Δ|` with `w₀ = z0 / z0_c` and `e^{iα} = z0_c / |z0_c|`,
/// so that `u = 0` maps to `z0` itself. Coordinates are `(Re Δ_m, Im Δ_m)` for `m ≠ c`.
pub fn cp2_affine_block(z0: &DVector<f64>, c: usize) -> Result<(DVector<f64>, DMatrix<f64>), GeometryError> {
    let z = r6_to_c3(z0);
    if c > 2 || z[c].norm() < 1e-6 {
        return Err(GeometryError::BadInput(format!("point outside affine chart {c}")));
    }
    let ph = z[c] / z[c].norm();
    let w0: [Complex<f64>; 3] = [0, 1, 2].map(|a| z[a] / z[c] * ph);
    let mut cols = Vec::new();
    for m in (0..3).filter(|&m| m != c) {
        for unit in [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)] {
            let mut e = [Complex::new(0.0, 0.0); 3];
            e[m] = unit * ph;
            cols.push(c3_to_r6(&e));
        }
    }
    Ok((c3_to_r6(&w0), DMatrix::from_columns(&cols)))
}

/// Chart index used along `z(t)`: the first coordinate up to `3π/8`, the second after.
pub fn cp2_chart_for(t: f64) -> usize {
    if t <= 3.0 * std::f64::consts::PI / 8.0 {
        0
    } else {
        1
    }
}

pub type VerticalMap<'a> = &'a (dyn Fn(&DVector<f64>) -> DMatrix<f64> + Sync);

/// Submersion metric read through a section chart.
pub struct QuotientMetric<'a, C: Chart, A: AmbientMetric> {
    pub chart: &'a C,
    pub ambient: &'a A,
    pub vertical: VerticalMap<'a>,
}

impl<C: Chart, A: AmbientMetric> QuotientMetric<'_, C, A> {
    /// Horizontal lift of the chart vector `xi` at `u`.
    pub fn horizontal_lift(&self, u: &DVector<f64>, xi: &DVector<f64>) -> Result<DVector<f64>, GeometryError> {
        let p = self.chart.point(u);
        let x = self.chart.tangents(u) * xi;
        let v = (self.vertical)(&p);
        let r = v.ncols();
        let mut w = DMatrix::zeros(p.len(), r + 1);
        w.view_mut((0, 0), (p.len(), r)).copy_from(&v);
        w.set_column(r, &x);
        let g = self.ambient.gram_of(&p, &w);
        let gvv = g.view((0, 0), (r, r)).into_owned();
        let gvx = g.view((0, r), (r, 1)).into_owned();
        let c = gvv
            .lu()
            .solve(&gvx)
            .ok_or_else(|| GeometryError::SingularGram("vertical generators are degenerate".into()))?;
        Ok(x - v * c)
    }

    /// Chart coordinates of a horizontal ambient vector at `u`; non-horizontal input is rejected.
    pub fn coords_of_horizontal(&self, u: &DVector<f64>, x: &DVector<f64>) -> Result<DVector<f64>, GeometryError> {
        let p = self.chart.point(u);
        let v = (self.vertical)(&p);
        let scale = self.ambient.inner(&p, x, x).max(0.0).sqrt();
        if scale < 1e-14 {
            return Err(GeometryError::BadInput("zero vector".into()));
        }
        for c in v.column_iter() {
            let c = c.into_owned();
            let nc = self.ambient.inner(&p, &c, &c).sqrt();
            if self.ambient.inner(&p, x, &c).abs() > 1e-8 * scale * nc {
                return Err(GeometryError::BadInput("vector is not horizontal".into()));
            }
        }
        let t = self.chart.tangents(u);
        let dim = t.ncols();
        let mut w = DMatrix::zeros(p.len(), dim + v.ncols());
        w.view_mut((0, 0), (p.len(), dim)).copy_from(&t);
        w.view_mut((0, dim), (p.len(), v.ncols())).copy_from(&v);
        let svd = w.clone().svd(true, true);
        let sol = svd.solve(x, 1e-12).map_err(|e| GeometryError::BadInput(e.to_string()))?;
        let resid = (&w * &sol - x).norm();
        if resid > 1e-8 * x.norm() {
            return Err(GeometryError::BadInput("vector is not tangent".into()));
        }
        Ok(sol.rows(0, dim).into_owned())
    }
}

impl<C: Chart, A: AmbientMetric> MetricField for QuotientMetric<'_, C, A> {
    fn dim(&self) -> usize {
        self.chart.dim()
    }

    fn gram(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let p = self.chart.point(u);
        let t = self.chart.tangents(u);
        let v = (self.vertical)(&p);
        let (dim, r) = (t.ncols(), v.ncols());
        let mut w = DMatrix::zeros(p.len(), dim + r);
        w.view_mut((0, 0), (p.len(), dim)).copy_from(&t);
        w.view_mut((0, dim), (p.len(), r)).copy_from(&v);
        let g = self.ambient.gram_of(&p, &w);
        let gtt = g.view((0, 0), (dim, dim)).into_owned();
        let gtv = g.view((0, dim), (dim, r)).into_owned();
        let gvv = g.view((dim, dim), (r, r)).into_owned();
        let out = match gvv.lu().solve(&gtv.transpose()) {
            Some(s) => gtt - &gtv * s,
            None => DMatrix::from_element(dim, dim, f64::NAN),
        };
        (&out + out.transpose()) * 0.5
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{curvature, sectional, Euclidean, DEFAULT_STEP};
    use crate::spaces::s3s5::z_of;

    fn hopf_vertical(p: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::from_columns(&[DVector::from_fn(6, |r, _| if r < 3 { -p[r + 3] } else { p[r - 3] })])
    }

    #[test]
    fn affine_section_passes_through_the_point() {
        for t in [0.1, 0.7, 1.3] {
            let z = c3_to_r6(&z_of(t));
            for c in [0, 1] {
                let chart = NormalizedChart::new(vec![cp2_affine_block(&z, c).unwrap()]);
                assert!((chart.point(&DVector::zeros(4)) - &z).norm() < 1e-14);
            }
        }
        assert!(cp2_affine_block(&c3_to_r6(&z_of(std::f64::consts::FRAC_PI_2)), 0).is_err());
    }

    #[test]
    fn normalized_chart_tangents_match_finite_differences() {
        let z = c3_to_r6(&z_of(0.5));
        let chart = NormalizedChart::new(vec![cp2_affine_block(&z, 0).unwrap()]);
        let u = DVector::from_vec(vec![0.1, -0.2, 0.05, 0.3]);
        let t = chart.tangents(&u);
        for a in 0..4 {
            let mut e = DVector::zeros(4);
            e[a] = 1e-6;
            let fd = (chart.point(&(&u + &e)) - chart.point(&(&u - &e))) / 2e-6;
            assert!((fd - t.column(a)).norm() < 1e-8);
        }
    }

    #[test]
    fn charts_agree_on_overlap() {
        // scalar curvature of Fubini–Study (sec ∈ [1, 4]) is 24 in this normalization
        for t in [0.5, 0.9] {
            let z = c3_to_r6(&z_of(t));
            let mut scal = Vec::new();
            for c in [0, 1] {
                let chart = NormalizedChart::new(vec![cp2_affine_block(&z, c).unwrap()]);
                let metric = QuotientMetric { chart: &chart, ambient: &Euclidean, vertical: &hopf_vertical };
                let cv = curvature(&metric, &DVector::zeros(4), DEFAULT_STEP).unwrap();
                let gi = cv.gram.clone().try_inverse().unwrap();
                let mut s = 0.0;
                for a in 0..4 {
                    for b in 0..4 {
                        for cc in 0..4 {
                            for d in 0..4 {
                                s += gi[(a, d)] * gi[(b, cc)] * cv.get(a, b, cc, d);
                            }
                        }
                    }
                }
                scal.push(s);
            }
            assert!((scal[0] - scal[1]).abs() < 1e-4, "{scal:?}");
            assert!((scal[0] - 24.0).abs() < 1e-4, "{scal:?}");
        }
    }

    #[test]
    fn holomorphic_plane_has_curvature_four() {
        let z = c3_to_r6(&z_of(0.3));
        let chart = NormalizedChart::new(vec![cp2_affine_block(&z, 0).unwrap()]);
        let metric = QuotientMetric { chart: &chart, ambient: &Euclidean, vertical: &hopf_vertical };
        let cv = curvature(&metric, &DVector::zeros(4), DEFAULT_STEP).unwrap();
        // coordinates (Re Δ₂, Im Δ₂, Re Δ₃, Im Δ₃): Δ₃ and iΔ₃ span a complex line
        let x = DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0]);
        let y = DVector::from_vec(vec![0.0, 0.0, 0.0, 1.0]);
        assert!((sectional(&cv, &x, &y).unwrap() - 4.0).abs() < 1e-4);
    }

    #[test]
    fn lift_roundtrip_and_rejection() {
        let z = c3_to_r6(&z_of(0.4));
        let chart = NormalizedChart::new(vec![cp2_affine_block(&z, 0).unwrap()]);
        let metric = QuotientMetric { chart: &chart, ambient: &Euclidean, vertical: &hopf_vertical };
        let u = DVector::zeros(4);
        let xi = DVector::from_vec(vec![0.3, -1.0, 0.2, 0.5]);
        let lift = metric.horizontal_lift(&u, &xi).unwrap();
        assert!((metric.coords_of_horizontal(&u, &lift).unwrap() - xi).norm() < 1e-10);
        let vert = hopf_vertical(&z).column(0).into_owned();
        assert!(metric.coords_of_horizontal(&u, &vert).is_err());
    }
}
