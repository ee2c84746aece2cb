//! `S³ × S⁵ ⊂ ℍ ⊕ ℂ³` and the actions on it.
//!
//! Ambient layout in ℝ¹⁰: `[w, x, y, z | Re z₁, Re z₂, Re z₃ | Im z₁, Im z₂, Im z₃]`.

use nalgebra::{Complex, DMatrix, DVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::quat::{exp_imag, Quat};

pub const AMBIENT: usize = 10;
pub const S5_OFFSET: usize = 4;
pub const SPHERE_DIMS: [usize; 2] = [3, 5];

pub fn quat_to_vec(q: Quat) -> DVector<f64> {
    DVector::from_row_slice(&q.to_array())
}

pub fn vec_to_quat(v: &DVector<f64>, offset: usize) -> Quat {
    Quat::new(v[offset], v[offset + 1], v[offset + 2], v[offset + 3])
}

/// `ℂ³ → ℝ⁶` in the (Re; Im) layout.
pub fn c3_to_r6(z: &[Complex<f64>; 3]) -> DVector<f64> {
    DVector::from_fn(6, |r, _| if r < 3 { z[r].re } else { z[r - 3].im })
}

pub fn r6_to_c3(v: &DVector<f64>) -> [Complex<f64>; 3] {
    [0, 1, 2].map(|a| Complex::new(v[a], v[a + 3]))
}

pub fn point(p: Quat, z: &[Complex<f64>; 3]) -> DVector<f64> {
    let mut out = DVector::zeros(AMBIENT);
    out.rows_mut(0, 4).copy_from(&quat_to_vec(p));
    out.rows_mut(S5_OFFSET, 6).copy_from(&c3_to_r6(z));
    out
}

fn s5_part(pt: &DVector<f64>) -> DVector<f64> {
    pt.rows(S5_OFFSET, 6).into_owned()
}

fn embed(s3: Option<Quat>, s5: Option<&DVector<f64>>) -> DVector<f64> {
    let mut out = DVector::zeros(AMBIENT);
    if let Some(q) = s3 {
        out.rows_mut(0, 4).copy_from(&quat_to_vec(q));
    }
    if let Some(w) = s5 {
        out.rows_mut(S5_OFFSET, 6).copy_from(w);
    }
    out
}

fn cross(v: Quat, w: &[f64]) -> Vector3<f64> {
    Vector3::new(v.x, v.y, v.z).cross(&Vector3::new(w[0], w[1], w[2]))
}

/// Action field of `v ∈ 𝔰𝔭(1)` for `b ↦ φ(b)` on `S⁵`: `2 v × w` on real and imaginary parts.
pub fn phi_field(v: Quat, z: &DVector<f64>) -> DVector<f64> {
    let re = cross(v, &z.as_slice()[0..3]) * 2.0;
    let im = cross(v, &z.as_slice()[3..6]) * 2.0;
    DVector::from_fn(6, |r, _| if r < 3 { re[r] } else { im[r - 3] })
}

/// `φ(b) z`, with `φ(b)` the rotation `w ↦ b w b⁻¹` of ℝ³ = Im ℍ.
pub fn phi_rotate(b: Quat, z: &DVector<f64>) -> DVector<f64> {
    let rot = |w: &[f64]| {
        let r = b * Quat::imag(w[0], w[1], w[2]) * b.inverse();
        [r.x, r.y, r.z]
    };
    let re = rot(&z.as_slice()[0..3]);
    let im = rot(&z.as_slice()[3..6]);
    DVector::from_fn(6, |r, _| if r < 3 { re[r] } else { im[r - 3] })
}

/// Multiplication by `e^{iθ}` on ℂ³.
pub fn phase(theta: f64, z: &DVector<f64>) -> DVector<f64> {
    let (c, s) = (theta.cos(), theta.sin());
    DVector::from_fn(6, |r, _| if r < 3 { c * z[r] - s * z[r + 3] } else { s * z[r - 3] + c * z[r] })
}

/// `(e^{iθ_left} a p b⁻¹, e^{iθ_hopf} φ(b) z)`: the product of the `S³ × S³` action,
/// the Hopf circle and the left circle on `S³`.
pub fn act(a: Quat, b: Quat, theta_hopf: f64, theta_left: f64, pt: &DVector<f64>) -> DVector<f64> {
    let p = vec_to_quat(pt, 0);
    let left = Quat::new(theta_left.cos(), theta_left.sin(), 0.0, 0.0);
    let q = left * a * p * b.inverse();
    let w = phase(theta_hopf, &phi_rotate(b, &s5_part(pt)));
    embed(Some(q), Some(&w))
}

pub const BASIS: [Quat; 3] = [Quat::I, Quat::J, Quat::K];

/// Action fields `(−p v, Φ(v)|_z)` of the second `S³` factor for `v = i, j, k`.
pub fn s3_fields(pt: &DVector<f64>) -> DMatrix<f64> {
    let p = vec_to_quat(pt, 0);
    let z = s5_part(pt);
    let cols: Vec<DVector<f64>> = BASIS.iter().map(|&v| embed(Some(-(p * v)), Some(&phi_field(v, &z)))).collect();
    DMatrix::from_columns(&cols)
}

/// `(0, i z)`.
pub fn hopf_field(pt: &DVector<f64>) -> DVector<f64> {
    let z = s5_part(pt);
    let iz = DVector::from_fn(6, |r, _| if r < 3 { -z[r + 3] } else { z[r - 3] });
    embed(None, Some(&iz))
}

/// `(i p, 0)`.
pub fn left_circle_field(pt: &DVector<f64>) -> DVector<f64> {
    embed(Some(Quat::I * vec_to_quat(pt, 0)), None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitAction {
    /// `S³ × S³`: `(u p − p v, Φ(v)|_z)`.
    Full,
    /// `1 × S³`: `(−p v, Φ(v)|_z)`.
    S3,
    /// Hopf circle: `(0, i z)`.
    Hopf,
}

/// Spanning set of the orbit tangent space.
pub fn orbit_tangent(action: OrbitAction, pt: &DVector<f64>) -> Vec<DVector<f64>> {
    match action {
        OrbitAction::Hopf => vec![hopf_field(pt)],
        OrbitAction::S3 => s3_fields(pt).column_iter().map(|c| c.into_owned()).collect(),
        OrbitAction::Full => {
            let p = vec_to_quat(pt, 0);
            let mut out: Vec<DVector<f64>> = BASIS.iter().map(|&u| embed(Some(u * p), None)).collect();
            out.extend(s3_fields(pt).column_iter().map(|c| c.into_owned()));
            out
        }
    }
}

/// `z(t) = (cos t, i sin t, 0)`.
pub fn z_of(t: f64) -> [Complex<f64>; 3] {
    [Complex::new(t.cos(), 0.0), Complex::new(0.0, t.sin()), Complex::new(0.0, 0.0)]
}

/// `γ(t) = (1, z(t))`.
pub fn gamma(t: f64) -> DVector<f64> {
    point(Quat::ONE, &z_of(t))
}

pub fn gamma_velocity(t: f64) -> DVector<f64> {
    point(Quat::ZERO, &[Complex::new(-t.sin(), 0.0), Complex::new(0.0, t.cos()), Complex::new(0.0, 0.0)])
}

/// `(γ(t), γ'(t))`, usable as a [`crate::geometry::Curve`].
pub fn gamma_curve(t: f64) -> (DVector<f64>, DVector<f64>) {
    (gamma(t), gamma_velocity(t))
}

/// Action field along a point for `(u, v) ∈ 𝔰𝔭(1)²` and a Hopf rate `c`:
/// `(u p − p v, Φ(v)|_z + c i z)`.
pub fn action_field(u: Quat, v: Quat, c: f64, pt: &DVector<f64>) -> DVector<f64> {
    let p = vec_to_quat(pt, 0);
    let z = s5_part(pt);
    let mut out = embed(Some(u * p - p * v), Some(&phi_field(v, &z)));
    out += hopf_field(pt) * c;
    out
}

/// Generators of `S³ × S³ × S¹` as `(u, v, c)`.
pub fn lambda_generators() -> Vec<(Quat, Quat, f64)> {
    let mut g: Vec<(Quat, Quat, f64)> = BASIS.iter().map(|&u| (u, Quat::ZERO, 0.0)).collect();
    g.extend(BASIS.iter().map(|&v| (Quat::ZERO, v, 0.0)));
    g.push((Quat::ZERO, Quat::ZERO, 1.0));
    g
}

/// A uniformly random point on `S³ × S⁵`.
pub fn random_point<R: rand::Rng + ?Sized>(rng: &mut R) -> DVector<f64> {
    let p = crate::sampling::random_unit_vector(4, rng);
    let z = crate::sampling::random_unit_vector(6, rng);
    embed(Some(vec_to_quat(&p, 0)), Some(&z))
}

/// `exp(s v)` for imaginary `v`.
pub fn exp_s(v: Quat, s: f64) -> Quat {
    exp_imag(v.scale(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;

    #[test]
    fn phi_at_curve_endpoints() {
        let z0 = c3_to_r6(&z_of(0.0));
        assert!(phi_field(Quat::I, &z0).norm() < 1e-15);
        let (fj, fk) = (phi_field(Quat::J, &z0), phi_field(Quat::K, &z0));
        assert!((fj.norm() - 2.0).abs() < 1e-14 && (fk.norm() - 2.0).abs() < 1e-14);
        assert!(fj.dot(&fk).abs() < 1e-14);
        let z1 = c3_to_r6(&z_of(std::f64::consts::FRAC_PI_2));
        assert!(phi_field(Quat::J, &z1).norm() < 1e-15);
    }

    #[test]
    fn phi_is_a_lie_algebra_map() {
        let z = c3_to_r6(&z_of(0.7));
        let (u, v) = (Quat::imag(0.3, -0.2, 0.5), Quat::imag(-0.1, 0.4, 0.2));
        // the bracket of vector fields w ↦ A w is the matrix commutator
        let amat = |q: Quat| {
            DMatrix::from_fn(6, 6, |r, c| {
                let mut e = DVector::zeros(6);
                e[c] = 1.0;
                phi_field(q, &e)[r]
            })
        };
        let br = u * v - v * u;
        let lhs = amat(br) * &z;
        let rhs = (amat(u) * amat(v) - amat(v) * amat(u)) * &z;
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn action_fields_are_derivatives_of_the_action() {
        let pt = point(Quat::new(0.5, 0.5, -0.5, 0.5), &z_of(0.4));
        let v = Quat::imag(0.2, -0.7, 0.1);
        let h = 1e-6;
        let fd = (act(Quat::ONE, exp_s(v, h), 0.0, 0.0, &pt) - act(Quat::ONE, exp_s(v, -h), 0.0, 0.0, &pt)) / (2.0 * h);
        let an = s3_fields(&pt) * DVector::from_vec(vec![v.x, v.y, v.z]);
        assert!((fd - an).norm() < 1e-8);
        let fd = (act(Quat::ONE, Quat::ONE, h, 0.0, &pt) - act(Quat::ONE, Quat::ONE, -h, 0.0, &pt)) / (2.0 * h);
        assert!((fd - hopf_field(&pt)).norm() < 1e-8);
        let fd = (act(Quat::ONE, Quat::ONE, 0.0, h, &pt) - act(Quat::ONE, Quat::ONE, 0.0, -h, &pt)) / (2.0 * h);
        assert!((fd - left_circle_field(&pt)).norm() < 1e-8);
    }

    #[test]
    fn orbit_dimensions() {
        let at = |t: f64| gamma(t);
        assert_eq!(orbit_tangent(OrbitAction::Hopf, &at(0.3)).len(), 1);
        assert_eq!(rank(&orbit_tangent(OrbitAction::S3, &at(0.0)), 1e-10), 3);
        assert_eq!(rank(&orbit_tangent(OrbitAction::Full, &at(0.6)), 1e-10), 6);
        assert_eq!(rank(&orbit_tangent(OrbitAction::Full, &at(0.0)), 1e-10), 5);
    }

    #[test]
    fn gamma_is_unit_speed_and_orthogonal_to_orbits() {
        assert_eq!(
            gamma(0.0),
            point(Quat::ONE, &[Complex::new(1.0, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)])
        );
        for t in [0.0, 0.3, 1.0, std::f64::consts::FRAC_PI_2] {
            let (p, v) = gamma_curve(t);
            assert!((v.norm() - 1.0).abs() < 1e-14);
            for a in [OrbitAction::Full, OrbitAction::Hopf] {
                for w in orbit_tangent(a, &p) {
                    assert!(w.dot(&v).abs() < 1e-14);
                }
            }
        }
    }
}
