//! Christoffel symbols and the Riemann tensor by central differences.
//!
//! Convention: `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z`, `R_{abcd} = g(R(∂_a,∂_b)∂_c, ∂_d)`,
//! so `sec(x,y) = R(x,y,y,x) / |x∧y|²`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::chart::MetricField;
use super::GeometryError;

pub const DEFAULT_STEP: f64 = 1e-4;
/// Relative tolerance on the pre-symmetrization defect.
pub const CURVATURE_TOL: f64 = 1e-4;

/// `Γ^k_{ij}` stored at `[(k m + i) m + j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel {
    pub m: usize,
    pub data: Vec<f64>,
}

impl Christoffel {
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.m + i) * self.m + j]
    }

    /// `Γ(x, y)^k = Γ^k_{ij} x^i y^j`.
    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let m = self.m;
        DVector::from_fn(m, |k, _| {
            let mut s = 0.0;
            for i in 0..m {
                if x[i] == 0.0 {
                    continue;
                }
                for j in 0..m {
                    s += self.get(k, i, j) * x[i] * y[j];
                }
            }
            s
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, b| a.max(b.abs()))
    }
}

fn shifted(u: &DVector<f64>, a: usize, d: f64) -> DVector<f64> {
    let mut v = u.clone();
    v[a] += d;
    v
}

fn check_gram(g: &DMatrix<f64>) -> Result<DMatrix<f64>, GeometryError> {
    if g.iter().any(|x| !x.is_finite()) {
        return Err(GeometryError::SingularGram("non-finite Gram entries".into()));
    }
    g.clone().try_inverse().ok_or_else(|| GeometryError::SingularGram("Gram matrix not invertible".into()))
}

/// Christoffel symbols from central differences of the Gram field.
pub fn christoffel<M: MetricField + ?Sized>(
    metric: &M,
    u: &DVector<f64>,
    h: f64,
) -> Result<Christoffel, GeometryError> {
    let m = metric.dim();
    let ginv = check_gram(&metric.gram(u))?;
    // dg[c] = ∂_c g
    let dg: Vec<DMatrix<f64>> =
        (0..m).map(|c| (metric.gram(&shifted(u, c, h)) - metric.gram(&shifted(u, c, -h))) / (2.0 * h)).collect();
    let mut data = vec![0.0; m * m * m];
    for i in 0..m {
        for j in i..m {
            // lowered: Γ_{lij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
            let low = DVector::from_fn(m, |l, _| 0.5 * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]));
            let up = &ginv * low;
            for k in 0..m {
                data[(k * m + i) * m + j] = up[k];
                data[(k * m + j) * m + i] = up[k];
            }
        }
    }
    Ok(Christoffel { m, data })
}

/// Riemann tensor at a point, algebraically symmetrized.
#[derive(Clone, Debug)]
pub struct CurvatureAtPoint {
    pub m: usize,
    /// `R_{abcd}` at `((a m + b) m + c) m + d`.
    pub r: Vec<f64>,
    pub gram: DMatrix<f64>,
    /// Largest pre-symmetrization violation relative to `max(1, max|R|)`.
    pub defect: f64,
}

impl CurvatureAtPoint {
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let m = self.m;
        self.r[((a * m + b) * m + c) * m + d]
    }

    /// `R(x, y, z, w)`.
    pub fn eval(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>, w: &DVector<f64>) -> f64 {
        let m = self.m;
        let mut s = 0.0;
        for a in 0..m {
            for b in 0..m {
                let xy = x[a] * y[b];
                if xy == 0.0 {
                    continue;
                }
                for c in 0..m {
                    let xyz = xy * z[c];
                    if xyz == 0.0 {
                        continue;
                    }
                    for d in 0..m {
                        s += xyz * w[d] * self.get(a, b, c, d);
                    }
                }
            }
        }
        s
    }

    /// Matrix `K_{ad} = R(∂_a, x, x, ∂_d)`, i.e. `⟨R_x ∂_a, ∂_d⟩`.
    pub fn jacobi_matrix(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let m = self.m;
        let mut k = DMatrix::zeros(m, m);
        for a in 0..m {
            for d in 0..m {
                let mut s = 0.0;
                for b in 0..m {
                    for c in 0..m {
                        s += self.get(a, b, c, d) * x[b] * x[c];
                    }
                }
                k[(a, d)] = s;
            }
        }
        (&k + k.transpose()) * 0.5
    }

    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.gram * y)[(0, 0)]
    }

    /// `Ric_bc = g^{ad} R_{abcd}`.
    pub fn ricci(&self) -> Result<DMatrix<f64>, GeometryError> {
        let m = self.m;
        let gi = check_gram(&self.gram)?;
        let ric = DMatrix::from_fn(m, m, |b, c| {
            let mut s = 0.0;
            for a in 0..m {
                for d in 0..m {
                    s += gi[(a, d)] * self.get(a, b, c, d);
                }
            }
            s
        });
        Ok((&ric + ric.transpose()) * 0.5)
    }

    /// Eigenvalues of the Ricci endomorphism, ascending. Chart independent.
    pub fn ricci_spectrum(&self) -> Result<Vec<f64>, GeometryError> {
        let ric = self.ricci()?;
        let chol = self
            .gram
            .clone()
            .cholesky()
            .ok_or_else(|| GeometryError::SingularGram("Gram matrix not positive definite".into()))?;
        let linv = chol.l().try_inverse().ok_or_else(|| GeometryError::SingularGram("Cholesky factor".into()))?;
        let s = &linv * ric * linv.transpose();
        let mut ev: Vec<f64> =
            nalgebra::SymmetricEigen::new((&s + s.transpose()) * 0.5).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }
}

/// Curvature tensor with `∂Γ` by central differences of `Γ`. The raw tensor is
/// projected onto algebraic curvature tensors (pair symmetries, then removal of
/// the totally antisymmetric part); the size of that correction is `defect`.
pub fn curvature<M: MetricField + ?Sized>(
    metric: &M,
    u: &DVector<f64>,
    h: f64,
) -> Result<CurvatureAtPoint, GeometryError> {
    let raw = raw_curvature(metric, u, h)?;
    let m = raw.m;
    let mut sym = vec![0.0; m * m * m * m];
    let idx = |a: usize, b: usize, c: usize, d: usize| ((a * m + b) * m + c) * m + d;
    let r = &raw.r;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let v = r[idx(a, b, c, d)] - r[idx(b, a, c, d)] - r[idx(a, b, d, c)]
                        + r[idx(b, a, d, c)]
                        + r[idx(c, d, a, b)]
                        - r[idx(d, c, a, b)]
                        - r[idx(c, d, b, a)]
                        + r[idx(d, c, b, a)];
                    sym[idx(a, b, c, d)] = v / 8.0;
                }
            }
        }
    }
    // totally antisymmetric part of a pair-symmetric tensor is a third of its cyclic sum
    let mut out = sym.clone();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let cyc = sym[idx(a, b, c, d)] + sym[idx(b, c, a, d)] + sym[idx(c, a, b, d)];
                    out[idx(a, b, c, d)] -= cyc / 3.0;
                }
            }
        }
    }
    let scale = r.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
    let defect = r.iter().zip(&out).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs())) / scale;
    if !defect.is_finite() || defect > 10.0 * CURVATURE_TOL {
        return Err(GeometryError::NumericalFailure { defect });
    }
    Ok(CurvatureAtPoint { m, r: out, gram: raw.gram, defect })
}

/// Unsymmetrized tensor from the coordinate formula.
pub fn raw_curvature<M: MetricField + ?Sized>(
    metric: &M,
    u: &DVector<f64>,
    h: f64,
) -> Result<CurvatureAtPoint, GeometryError> {
    let m = metric.dim();
    let gram = metric.gram(u);
    let gamma = christoffel(metric, u, h)?;
    let shifted_gammas: Vec<(Christoffel, Christoffel)> = (0..m)
        .into_par_iter()
        .map(|a| Ok((christoffel(metric, &shifted(u, a, h), h)?, christoffel(metric, &shifted(u, a, -h), h)?)))
        .collect::<Result<_, GeometryError>>()?;
    // dgam[a][(d, b, c)] = ∂_a Γ^d_{bc}
    let dgam = |a: usize, d: usize, b: usize, c: usize| {
        (shifted_gammas[a].0.get(d, b, c) - shifted_gammas[a].1.get(d, b, c)) / (2.0 * h)
    };
    // R^d_{abc}
    let mut rup = vec![0.0; m * m * m * m];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let mut v = dgam(a, d, b, c) - dgam(b, d, a, c);
                    for e in 0..m {
                        v += gamma.get(e, b, c) * gamma.get(d, a, e) - gamma.get(e, a, c) * gamma.get(d, b, e);
                    }
                    rup[((a * m + b) * m + c) * m + d] = v;
                }
            }
        }
    }
    let mut r = vec![0.0; m * m * m * m];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let mut v = 0.0;
                    for e in 0..m {
                        v += rup[((a * m + b) * m + c) * m + e] * gram[(e, d)];
                    }
                    r[((a * m + b) * m + c) * m + d] = v;
                }
            }
        }
    }
    Ok(CurvatureAtPoint { m, r, gram, defect: 0.0 })
}

/// `R(x,y,y,x) / (|x|²|y|² − g(x,y)²)`.
pub fn sectional(c: &CurvatureAtPoint, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64, GeometryError> {
    let den = c.inner(x, x) * c.inner(y, y) - c.inner(x, y).powi(2);
    let scale = c.inner(x, x) * c.inner(y, y);
    if den <= 1e-12 * scale.max(1e-300) {
        return Err(GeometryError::DegeneratePlane);
    }
    Ok(c.eval(x, y, y, x) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::chart::{Chart, Euclidean, FlatChart, FnMetric, PulledBack, SphereProductChart};

    fn round(n: usize) -> SphereProductChart {
        let mut b = DVector::zeros(n + 1);
        b[n] = 1.0;
        SphereProductChart::new(&b, &[n])
    }

    #[test]
    fn euclidean_field_has_zero_christoffels() {
        let m = FnMetric { dim: 3, f: |_u: &DVector<f64>| DMatrix::identity(3, 3) };
        let g = christoffel(&m, &DVector::from_vec(vec![0.3, 0.1, -0.2]), DEFAULT_STEP).unwrap();
        assert!(g.max_abs() < 1e-10);
        let c = curvature(&m, &DVector::zeros(3), DEFAULT_STEP).unwrap();
        assert!(c.r.iter().all(|x| x.abs() < 1e-6));
    }

    #[test]
    fn flat_torus_is_flat() {
        // ℝ⁴ ⊃ S¹×S¹ parametrized by angles
        struct Torus;
        impl Chart for Torus {
            fn dim(&self) -> usize {
                2
            }
            fn ambient_dim(&self) -> usize {
                4
            }
            fn point(&self, u: &DVector<f64>) -> DVector<f64> {
                DVector::from_vec(vec![u[0].cos(), u[0].sin(), u[1].cos(), u[1].sin()])
            }
            fn tangents(&self, u: &DVector<f64>) -> DMatrix<f64> {
                DMatrix::from_row_slice(4, 2, &[-u[0].sin(), 0.0, u[0].cos(), 0.0, 0.0, -u[1].sin(), 0.0, u[1].cos()])
            }
        }
        let m = PulledBack { chart: &Torus, ambient: &Euclidean };
        let c = curvature(&m, &DVector::from_vec(vec![0.4, 1.1]), DEFAULT_STEP).unwrap();
        assert!(c.r.iter().all(|x| x.abs() < 1e-6));
        let _ = FlatChart(2);
    }

    #[test]
    fn s2_graph_chart_has_vanishing_christoffels_at_base() {
        let chart = round(2);
        let m = PulledBack { chart: &chart, ambient: &Euclidean };
        let g = christoffel(&m, &DVector::zeros(2), DEFAULT_STEP).unwrap();
        assert!(g.max_abs() < 1e-10);
    }

    #[test]
    fn s3_christoffels_match_closed_form() {
        // graph metric g = I + u uᵀ/(1−|u|²); Γ^k_ij = u^k (δ_ij + u_i u_j/(1−|u|²))
        let chart = round(3);
        let m = PulledBack { chart: &chart, ambient: &Euclidean };
        let u = DVector::from_vec(vec![0.2, -0.3, 0.1]);
        let g = christoffel(&m, &u, DEFAULT_STEP).unwrap();
        let s = 1.0 - u.norm_squared();
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let d = if i == j { 1.0 } else { 0.0 };
                    let want = u[k] * (d + u[i] * u[j] / s);
                    assert!((g.get(k, i, j) - want).abs() < 1e-6, "{k}{i}{j}");
                }
            }
        }
    }

    #[test]
    fn round_s5_has_unit_sectional_curvature() {
        let chart = round(5);
        let m = PulledBack { chart: &chart, ambient: &Euclidean };
        let u = DVector::from_vec(vec![0.1, -0.2, 0.05, 0.3, 0.0]);
        let c = curvature(&m, &u, DEFAULT_STEP).unwrap();
        assert!(c.defect < 1e-4, "defect {}", c.defect);
        let x = DVector::from_vec(vec![1.0, 0.5, 0.0, -0.2, 0.3]);
        let y = DVector::from_vec(vec![0.0, 0.1, 1.0, 0.4, -0.7]);
        assert!((sectional(&c, &x, &y).unwrap() - 1.0).abs() < 1e-4);
        assert!(sectional(&c, &x, &(&x * 2.0)).is_err());
    }

    #[test]
    fn symmetry_defect_converges_at_second_order() {
        let chart = round(3);
        let m = PulledBack { chart: &chart, ambient: &Euclidean };
        let u = DVector::from_vec(vec![0.3, -0.25, 0.2]);
        let d1 = curvature(&m, &u, 0.02).unwrap().defect;
        let d2 = curvature(&m, &u, 0.01).unwrap().defect;
        let ratio = d1 / d2;
        assert!((3.0..=5.0).contains(&ratio), "ratio {ratio} ({d1} / {d2})");
    }

    #[test]
    fn symmetrized_tensor_has_curvature_symmetries() {
        let chart = round(3);
        let m = PulledBack { chart: &chart, ambient: &Euclidean };
        let c = curvature(&m, &DVector::from_vec(vec![0.1, 0.2, -0.1]), 1e-3).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for cc in 0..3 {
                    for d in 0..3 {
                        let v = c.get(a, b, cc, d);
                        assert!((v + c.get(b, a, cc, d)).abs() < 1e-12);
                        assert!((v + c.get(a, b, d, cc)).abs() < 1e-12);
                        assert!((v - c.get(cc, d, a, b)).abs() < 1e-12);
                        let bianchi = v + c.get(b, cc, a, d) + c.get(cc, a, b, d);
                        assert!(bianchi.abs() < 1e-12);
                    }
                }
            }
        }
    }
}
