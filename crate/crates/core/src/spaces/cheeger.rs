//! Cheeger deformations `g_l` induced from `l² Q + g` on `G × M`.

use nalgebra::{DMatrix, DVector};

use crate::geometry::{AmbientMetric, Euclidean, GeometryError};
use crate::quat::Quat;

use super::s3s5::{quat_to_vec, vec_to_quat, BASIS};

pub type FieldMap = Box<dyn Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync>;

/// Base metric, action fields of a `Q`-orthonormal basis of 𝔤, and `l > 0`.
pub struct CheegerMetric<B: AmbientMetric = Euclidean> {
    pub base: B,
    fields: FieldMap,
    l: f64,
}

impl<B: AmbientMetric> CheegerMetric<B> {
    pub fn new(base: B, fields: FieldMap, l: f64) -> Result<Self, GeometryError> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(GeometryError::BadInput(format!("Cheeger parameter l = {l} must be positive")));
        }
        Ok(Self { base, fields, l })
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn fields(&self, p: &DVector<f64>) -> DMatrix<f64> {
        (self.fields)(p)
    }

    /// Blocks of the base Gram of `[A | vs]` and the lift system `l² I + Aᵀ G A`.
    fn blocks(&self, p: &DVector<f64>, vs: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
        let a = self.fields(p);
        let r = a.ncols();
        let mut w = DMatrix::zeros(p.len(), r + vs.ncols());
        w.view_mut((0, 0), (p.len(), r)).copy_from(&a);
        w.view_mut((0, r), (p.len(), vs.ncols())).copy_from(vs);
        let g = self.base.gram_of(p, &w);
        let m = g.view((0, 0), (r, r)) + DMatrix::identity(r, r) * (self.l * self.l);
        let gav = g.view((0, r), (r, vs.ncols())).into_owned();
        let gvv = g.view((r, r), (vs.ncols(), vs.ncols())).into_owned();
        (m, gav, gvv)
    }

    /// Lie algebra coordinates `ξ` of the lift: `(l² I + AᵀGA) ξ = AᵀG x`.
    pub fn lift(&self, p: &DVector<f64>, x: &DVector<f64>) -> DVector<f64> {
        let (m, gav, _) = self.blocks(p, &DMatrix::from_columns(std::slice::from_ref(x)));
        m.lu().solve(&gav.column(0).into_owned()).expect("lift system is positive definite for l > 0")
    }

    /// `g_l(x, y)`.
    pub fn eval(&self, p: &DVector<f64>, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.gram_of(p, &DMatrix::from_columns(&[x.clone(), y.clone()]))[(0, 1)]
    }

    /// `C_l = G_l⁻¹ G` on the span of the columns of `basis`, so that `g(x, y) = g_l(C_l x, y)`.
    pub fn c_operator(&self, p: &DVector<f64>, basis: &DMatrix<f64>) -> Result<DMatrix<f64>, GeometryError> {
        let gl = self.gram_of(p, basis);
        let g = self.base.gram_of(p, basis);
        gl.lu().solve(&g).ok_or_else(|| GeometryError::SingularGram("g_l on the given basis".into()))
    }
}

impl<B: AmbientMetric> AmbientMetric for CheegerMetric<B> {
    /// `G_VV − G_VA (l² I + G_AA)⁻¹ G_AV`, which equals `l²|ξ|² + g(x − Aξ, ·)` at the lift.
    fn gram_of(&self, p: &DVector<f64>, vs: &DMatrix<f64>) -> DMatrix<f64> {
        let (m, gav, gvv) = self.blocks(p, vs);
        let sol = m.lu().solve(&gav).expect("lift system is positive definite for l > 0");
        let out = gvv - gav.transpose() * sol;
        (&out + out.transpose()) * 0.5
    }
}

/// Diagonal action `a·(p, q) = (a p, a q)` on `S³ × S³ ⊂ ℝ⁸`; fields `(v p, v q)`.
pub fn diagonal_s3s3_fields(pt: &DVector<f64>) -> DMatrix<f64> {
    let (p, q) = (vec_to_quat(pt, 0), vec_to_quat(pt, 4));
    let cols: Vec<DVector<f64>> = BASIS
        .iter()
        .map(|&v| {
            let mut c = DVector::zeros(8);
            c.rows_mut(0, 4).copy_from(&quat_to_vec(v * p));
            c.rows_mut(4, 4).copy_from(&quat_to_vec(v * q));
            c
        })
        .collect();
    DMatrix::from_columns(&cols)
}

/// `(S³ × S³, g_l)` for the diagonal action.
pub fn cheeger_s3s3(l: f64) -> Result<CheegerMetric, GeometryError> {
    CheegerMetric::new(Euclidean, Box::new(diagonal_s3s3_fields), l)
}

/// `(S³ × S⁵, g_l)` for the `1 × S³` action `b·(p, z) = (p b⁻¹, φ(b) z)`.
pub fn cheeger_s3s5(l: f64) -> Result<CheegerMetric, GeometryError> {
    CheegerMetric::new(Euclidean, Box::new(super::s3s5::s3_fields), l)
}

pub fn s3s3_point(p: Quat, q: Quat) -> DVector<f64> {
    let mut out = DVector::zeros(8);
    out.rows_mut(0, 4).copy_from(&quat_to_vec(p));
    out.rows_mut(4, 4).copy_from(&quat_to_vec(q));
    out
}
