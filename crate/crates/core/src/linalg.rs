//! Small dense helpers shared by the algebraic and numerical modules.

use nalgebra::{DMatrix, DVector};

/// Orthonormal basis (Euclidean) of the span of `vectors`, dropping directions
/// whose residual norm falls below `tol`. Two Gram–Schmidt passes.
pub fn orthonormal_basis(vectors: &[DVector<f64>], tol: f64) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&r);
                r -= b * c;
            }
        }
        let n = r.norm();
        if n > tol {
            basis.push(r / n);
        }
    }
    basis
}

/// Orthonormal basis with respect to the inner product given by `gram`.
pub fn gram_orthonormal_basis(vectors: &[DVector<f64>], gram: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let ip = |a: &DVector<f64>, b: &DVector<f64>| (a.transpose() * gram * b)[(0, 0)];
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = ip(b, &r);
                r -= b * c;
            }
        }
        let n = ip(&r, &r).max(0.0).sqrt();
        if n > tol {
            basis.push(r / n);
        }
    }
    basis
}

/// Numerical rank: singular values above `tol` times max(1, σ_max).
pub fn rank(vectors: &[DVector<f64>], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = DMatrix::from_columns(vectors);
    let sv = m.singular_values();
    let scale = sv.iter().cloned().fold(1.0, f64::max);
    sv.iter().filter(|&&s| s > tol * scale).count()
}

/// Orthonormal basis of the null space of `m` (right kernel).
pub fn null_space(m: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let n = m.ncols();
    if m.nrows() == 0 {
        return (0..n).map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })).collect();
    }
    // pad to square so the SVD exposes every right singular vector
    let rows = m.nrows().max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let scale = svd.singular_values.iter().cloned().fold(1.0, f64::max);
    (0..n).filter(|&i| svd.singular_values[i] <= tol * scale).map(|i| vt.row(i).transpose()).collect()
}

/// Orthonormal basis of the Euclidean orthogonal complement of `span` in ℝⁿ.
pub fn orthogonal_complement(span: &[DVector<f64>], n: usize, tol: f64) -> Vec<DVector<f64>> {
    if span.is_empty() {
        return (0..n).map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })).collect();
    }
    let m = DMatrix::from_columns(span).transpose();
    null_space(&m, tol)
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_drops_dependent_vectors() {
        let v = vec![
            DVector::from_vec(vec![1.0, 0.0, 0.0]),
            DVector::from_vec(vec![2.0, 0.0, 0.0]),
            DVector::from_vec(vec![1.0, 1.0, 0.0]),
        ];
        let b = orthonormal_basis(&v, 1e-10);
        assert_eq!(b.len(), 2);
        assert_eq!(rank(&v, 1e-10), 2);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = null_space(&m, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&m * v).norm() < 1e-12);
        }
        let comp = orthogonal_complement(&[DVector::from_vec(vec![0.0, 0.0, 1.0])], 3, 1e-12);
        assert_eq!(comp.len(), 2);
    }

    #[test]
    fn gram_basis_is_orthonormal_in_gram() {
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let e = vec![DVector::from_vec(vec![1.0, 0.0]), DVector::from_vec(vec![0.0, 1.0])];
        let b = gram_orthonormal_basis(&e, &g, 1e-12);
        let m = DMatrix::from_columns(&b);
        let id = m.transpose() * &g * &m;
        assert!((id - DMatrix::identity(2, 2)).norm() < 1e-12);
    }
}
