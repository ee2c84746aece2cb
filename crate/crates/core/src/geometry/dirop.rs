//! The directional curvature operator `R_x = R(·, x)x` restricted to `x^⊥`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::curvature::CurvatureAtPoint;
use super::GeometryError;
use crate::linalg::gram_orthonormal_basis;

const BASIS_TOL: f64 = 1e-9;

/// `R_x` in a metric-orthonormal basis of `x^⊥` (within a subspace if given),
/// with `x` normalized. Eigenvalues are ascending.
#[derive(Clone, Debug)]
pub struct DirOp {
    pub matrix: DMatrix<f64>,
    pub x: DVector<f64>,
    pub basis: Vec<DVector<f64>>,
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl DirOp {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Eigenvector `i` as a coordinate tangent vector.
    pub fn eigenvector(&self, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.x.len());
        for (j, b) in self.basis.iter().enumerate() {
            v += b * self.eigenvectors[(j, i)];
        }
        v
    }
}

pub fn directional_operator(
    curv: &CurvatureAtPoint,
    x: &DVector<f64>,
    subspace: Option<&[DVector<f64>]>,
) -> Result<DirOp, GeometryError> {
    let m = curv.m;
    if x.len() != m {
        return Err(GeometryError::BadInput(format!("direction has length {}, expected {m}", x.len())));
    }
    let nx = curv.inner(x, x).max(0.0).sqrt();
    if nx < 1e-12 {
        return Err(GeometryError::BadInput("zero direction".into()));
    }
    let x = x / nx;
    let span: Vec<DVector<f64>> = match subspace {
        Some(s) => s.to_vec(),
        None => (0..m).map(|i| DVector::from_fn(m, |j, _| if i == j { 1.0 } else { 0.0 })).collect(),
    };
    // put x first so that Gram-Schmidt removes it from the remaining span
    let mut seed = vec![x.clone()];
    seed.extend(span.iter().map(|v| {
        let c = curv.inner(&x, v);
        v - &x * c
    }));
    let mut basis = gram_orthonormal_basis(&seed, &curv.gram, BASIS_TOL);
    basis.remove(0);
    if basis.is_empty() {
        return Err(GeometryError::NotTransverse);
    }
    let k = curv.jacobi_matrix(&x);
    let e = DMatrix::from_columns(&basis);
    let mut matrix = e.transpose() * k * &e;
    matrix = (&matrix + matrix.transpose()) * 0.5;
    let eig = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let eigenvectors =
        DMatrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
    Ok(DirOp { matrix, x, basis, eigenvalues, eigenvectors })
}

/// Sum of the `k` smallest eigenvalues, which by Ky Fan is the minimum of
/// `Σ sec(x, e_i)` over orthonormal `k`-frames in `x^⊥`.
///
/// # Panics
/// If `k` is zero or exceeds the operator dimension.
pub fn ksum_min(op: &DirOp, k: usize) -> f64 {
    assert!(k >= 1 && k <= op.dim(), "k = {k} out of range 1..={}", op.dim());
    op.eigenvalues.iter().take(k).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curvature::CurvatureAtPoint;
    use crate::sampling::{child_rng, random_unit_vector, standard_normal};

    /// Algebraic curvature tensor `R = Σ_s c_s A_s ∧ A_s`-type built from symmetric matrices,
    /// `R_abcd = Σ_s c_s (S_ad S_bc − S_ac S_bd)`, which has all the symmetries.
    fn random_tensor(m: usize, seed: u64) -> CurvatureAtPoint {
        let mut rng = child_rng(seed, 0);
        let mut r = vec![0.0; m * m * m * m];
        for s in 0..3 {
            let a = DMatrix::from_fn(m, m, |_, _| standard_normal(&mut rng));
            let sm = &a + a.transpose();
            let c = if s == 1 { -0.7 } else { 1.0 };
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        for l in 0..m {
                            r[((i * m + j) * m + k) * m + l] += c * (sm[(i, l)] * sm[(j, k)] - sm[(i, k)] * sm[(j, l)]);
                        }
                    }
                }
            }
        }
        CurvatureAtPoint { m, r, gram: DMatrix::identity(m, m), defect: 0.0 }
    }

    #[test]
    fn ky_fan_sum_bounds_random_frames() {
        let m = 7;
        let c = random_tensor(m, 3);
        let mut rng = child_rng(11, 0);
        let x = random_unit_vector(m, &mut rng);
        let op = directional_operator(&c, &x, None).unwrap();
        assert_eq!(op.dim(), m - 1);
        for k in 1..m {
            let bound = ksum_min(&op, k);
            let mut best = f64::INFINITY;
            for _ in 0..10_000 {
                let vs: Vec<DVector<f64>> = (0..k).map(|_| random_unit_vector(m, &mut rng)).collect();
                let mut seed = vec![x.clone()];
                seed.extend(vs);
                let mut frame = gram_orthonormal_basis(&seed, &c.gram, 1e-9);
                frame.remove(0);
                let s: f64 = frame.iter().map(|e| c.eval(e, &x, &x, e)).sum();
                assert!(s >= bound - 1e-9, "frame sum {s} below Ky Fan bound {bound}");
                best = best.min(s);
            }
            // the bound is attained by eigenvectors
            let s: f64 = (0..k)
                .map(|i| {
                    let e = op.eigenvector(i);
                    c.eval(&e, &x, &x, &e)
                })
                .sum();
            assert!((s - bound).abs() < 1e-9);
            assert!(best >= bound - 1e-9);
        }
    }

    #[test]
    fn subspace_restriction_and_transversality() {
        let m = 4;
        let c = random_tensor(m, 5);
        let e = |i: usize| DVector::from_fn(m, |j, _| if i == j { 1.0 } else { 0.0 });
        let op = directional_operator(&c, &e(0), Some(&[e(0), e(1), e(2)])).unwrap();
        assert_eq!(op.dim(), 2);
        assert!(matches!(directional_operator(&c, &e(0), Some(&[e(0)])), Err(GeometryError::NotTransverse)));
    }

    #[test]
    #[should_panic]
    fn ksum_out_of_range_panics() {
        let c = random_tensor(3, 1);
        let op = directional_operator(&c, &DVector::from_vec(vec![1.0, 0.0, 0.0]), None).unwrap();
        ksum_min(&op, 3);
    }
}
