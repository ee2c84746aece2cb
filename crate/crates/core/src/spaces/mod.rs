//! Concrete spaces: `S³ × S³` and `S³ × S⁵` with Cheeger deformations, and the
//! quotients `S³ × ℂP²` and `S² × ℂP²`.

pub mod cheeger;
pub mod invariance;
pub mod quotient;
pub mod s3s5;
pub mod zero_planes;

use nalgebra::{DMatrix, DVector};

use crate::geometry::GeometryError;

pub use cheeger::{cheeger_s3s3, cheeger_s3s5, diagonal_s3s3_fields, s3s3_point, CheegerMetric};
pub use invariance::{invariance_check, killing_defect};
pub use quotient::{cp2_affine_block, cp2_chart_for, transverse_sphere_block, NormalizedChart, QuotientMetric};
pub use s3s5::{gamma, gamma_velocity, orbit_tangent, phi_field, OrbitAction};
pub use zero_planes::{chain_bound, y_perp_space, zero_plane_conditions, ZeroPlaneDiagnostics, ZeroPlaneWitness};

/// Hopf generator `(0, i z)` as a one-column matrix.
pub fn hopf_vertical(p: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::from_columns(&[s3s5::hopf_field(p)])
}

/// Hopf and left-circle generators.
pub fn torus_vertical(p: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::from_columns(&[s3s5::hopf_field(p), s3s5::left_circle_field(p)])
}

fn split(pt: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    (pt.rows(0, 4).into_owned(), pt.rows(s3s5::S5_OFFSET, 6).into_owned())
}

/// Section chart of `S³ × ℂP²` through `pt ∈ S³ × S⁵`, using affine chart `c` on ℂP².
pub fn s3cp2_chart(pt: &DVector<f64>, c: usize) -> Result<NormalizedChart, GeometryError> {
    let (p, z) = split(pt);
    Ok(NormalizedChart::new(vec![transverse_sphere_block(&p, &[]), cp2_affine_block(&z, c)?]))
}

/// Section chart of `S² × ℂP²` through `pt`: the `S³` block is transverse to `p ↦ e^{iθ} p`.
pub fn s2cp2_chart(pt: &DVector<f64>, c: usize) -> Result<NormalizedChart, GeometryError> {
    let (p, z) = split(pt);
    let ip = s3s5::left_circle_field(pt).rows(0, 4).into_owned();
    Ok(NormalizedChart::new(vec![transverse_sphere_block(&p, &[ip]), cp2_affine_block(&z, c)?]))
}

/// The affine chart of ℂP² in which `z` has the largest homogeneous coordinate.
pub fn best_affine_chart(pt: &DVector<f64>) -> usize {
    let z = s3s5::r6_to_c3(&pt.rows(s3s5::S5_OFFSET, 6).into_owned());
    (0..3).max_by(|&a, &b| z[a].norm().total_cmp(&z[b].norm())).unwrap_or(0)
}
