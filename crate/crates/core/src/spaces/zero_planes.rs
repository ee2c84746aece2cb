//! Candidate zero-curvature planes along `γ` for the deformed `S³ × S⁵`.
//!
//! A plane `Span{(x, 0), (0, y)}` is admissible at `t` when `y = λ Ψ_t(x) + y⊥` with
//! `y⊥` orthogonal to the `S³`-orbit and to `i z(t)`, and `y ⟂ i z(t)`.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::linalg::{orthogonal_complement, rank};
use crate::quat::Quat;

use super::s3s5::{c3_to_r6, phi_field, z_of, BASIS};

pub const WITNESS_TOL: f64 = 1e-8;
const KERNEL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroPlaneWitness {
    pub t: f64,
    /// `x ∈ 𝔰𝔭(1)` in the basis `i, j, k`.
    pub x: [f64; 3],
    pub lambda: f64,
    /// `y⊥ ∈ T_{z(t)} S⁵` in the (Re; Im) layout of ℂ³.
    pub y_perp: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroPlaneDiagnostics {
    pub holds: bool,
    /// `max_v |g(y, Φ(v)) − λ g(x, v)|` over `v = i, j, k`.
    pub middle_defect: f64,
    /// `|g(y, i z)|`.
    pub last_defect: f64,
    /// Largest inner product of `y⊥` with `z`, `i z` and the orbit.
    pub perp_defect: f64,
    /// Dimension of the admissible `y⊥` space at `t`.
    pub y_perp_dim: usize,
}

fn iz(z: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(6, |r, _| if r < 3 { -z[r + 3] } else { z[r - 3] })
}

fn orbit(z: &DVector<f64>) -> Vec<DVector<f64>> {
    BASIS.iter().map(|&v| phi_field(v, z)).collect()
}

/// `Ψ_t(x) = Σ x_a Φ(e_a) / |Φ(e_a)|²`; `None` if `x` has a component along the kernel of `Φ|_{z(t)}`.
pub fn psi(t: f64, x: [f64; 3]) -> Option<DVector<f64>> {
    let z = c3_to_r6(&z_of(t));
    let mut out = DVector::zeros(6);
    for (a, f) in orbit(&z).into_iter().enumerate() {
        let n2 = f.norm_squared();
        if n2 < KERNEL_TOL {
            if x[a].abs() > KERNEL_TOL {
                return None;
            }
            continue;
        }
        out += f * (x[a] / n2);
    }
    Some(out)
}

/// Basis of the vectors in `T_{z(t)} S⁵` orthogonal to the `S³`-orbit and to `i z(t)`.
pub fn y_perp_space(t: f64) -> Vec<DVector<f64>> {
    let z = c3_to_r6(&z_of(t));
    let mut span = vec![z.clone(), iz(&z)];
    span.extend(orbit(&z));
    orthogonal_complement(&span, 6, 1e-9)
}

pub fn zero_plane_conditions(w: &ZeroPlaneWitness) -> ZeroPlaneDiagnostics {
    let z = c3_to_r6(&z_of(w.t));
    let y_perp = DVector::from_row_slice(&w.y_perp);
    let y_perp_dim = y_perp_space(w.t).len();
    let bad = ZeroPlaneDiagnostics {
        holds: false,
        middle_defect: f64::INFINITY,
        last_defect: f64::INFINITY,
        perp_defect: f64::INFINITY,
        y_perp_dim,
    };
    let psi_x = match psi(w.t, w.x) {
        Some(p) => p,
        None if w.lambda == 0.0 => DVector::zeros(6),
        None => return bad,
    };
    if y_perp.len() != 6 {
        return bad;
    }
    let y = psi_x * w.lambda + &y_perp;
    let fields = orbit(&z);
    let middle_defect =
        fields.iter().enumerate().map(|(a, f)| (y.dot(f) - w.lambda * w.x[a]).abs()).fold(0.0, f64::max);
    let last_defect = y.dot(&iz(&z)).abs();
    let mut probes = vec![z.clone(), iz(&z)];
    probes.extend(fields);
    let perp_defect = probes.iter().map(|v| y_perp.dot(v).abs()).fold(0.0, f64::max);
    let holds = middle_defect < WITNESS_TOL && last_defect < WITNESS_TOL && perp_defect < WITNESS_TOL;
    ZeroPlaneDiagnostics { holds, middle_defect, last_defect, perp_defect, y_perp_dim }
}

/// Largest number of independent `(x_m, y_m)` such that every `Span{(x_0, y_0), (x_m, y_m)}`
/// is admissible. With `y_0 ≠ 0` the `x_m` are independent (at most `1 + 3`); with `y_0 = 0`
/// the `y_m` lie in `Span{Ψ_t(x_0)} ⊕ y⊥`.
pub fn chain_bound(t: f64) -> usize {
    let yp = y_perp_space(t);
    let s = 1.0 / 3f64.sqrt();
    let candidates = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [s, s, s]];
    let mut best = 1 + BASIS.len();
    for x0 in candidates {
        let mut span = yp.clone();
        if let Some(p) = psi(t, x0) {
            span.push(p);
        }
        best = best.max(1 + rank(&span, 1e-9));
    }
    best
}

/// `x` as an imaginary quaternion.
pub fn x_quat(x: [f64; 3]) -> Quat {
    Quat::imag(x[0], x[1], x[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

    fn in_span(v: &DVector<f64>, basis: &[DVector<f64>]) -> bool {
        let mut all = basis.to_vec();
        all.push(v.clone());
        rank(&all, 1e-9) == basis.len()
    }

    #[test]
    fn audit_dimensions() {
        let dims: Vec<usize> =
            [0.0, FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8, FRAC_PI_2].iter().map(|&t| y_perp_space(t).len()).collect();
        assert_eq!(dims, vec![2, 1, 2, 1, 2]);
    }

    #[test]
    fn spans_match_the_quoted_vectors() {
        let c = |v: [(f64, f64); 3]| c3_to_r6(&v.map(|(a, b)| nalgebra::Complex::new(a, b)));
        let s = y_perp_space(FRAC_PI_4);
        assert!(in_span(&c([(1.0, 0.0), (0.0, -1.0), (0.0, 0.0)]), &s));
        assert!(in_span(&c([(0.0, 1.0), (1.0, 0.0), (0.0, 0.0)]), &s));
        let t: f64 = 0.3;
        assert!(in_span(&c([(t.sin(), 0.0), (0.0, -t.cos()), (0.0, 0.0)]), &y_perp_space(t)));
        let s0 = y_perp_space(0.0);
        assert!(in_span(&c([(0.0, 0.0), (0.0, 1.0), (0.0, 0.0)]), &s0));
        assert!(in_span(&c([(0.0, 0.0), (0.0, 0.0), (0.0, 1.0)]), &s0));
        let s1 = y_perp_space(FRAC_PI_2);
        assert!(in_span(&c([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]), &s1));
        assert!(in_span(&c([(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]), &s1));
    }

    #[test]
    fn witnesses() {
        let t: f64 = 0.3;
        let yp = y_perp_space(t)[0].clone();
        let w = ZeroPlaneWitness { t, x: [0.0, 1.0, 0.0], lambda: 0.0, y_perp: yp.as_slice().to_vec() };
        assert!(zero_plane_conditions(&w).holds);
        // Φ(k)z is not orthogonal to iz, so λ ≠ 0 along k breaks the last condition
        let w = ZeroPlaneWitness { t, x: [0.0, 0.0, 1.0], lambda: 1.0, y_perp: vec![0.0; 6] };
        let d = zero_plane_conditions(&w);
        assert!(d.middle_defect < 1e-12 && !d.holds);
        let w = ZeroPlaneWitness { t, x: [1.0, 0.0, 0.0], lambda: 0.7, y_perp: vec![0.0; 6] };
        assert!(zero_plane_conditions(&w).holds);
        // at t = 0, x along the kernel direction i needs λ = 0
        let w = ZeroPlaneWitness { t: 0.0, x: [1.0, 0.0, 0.0], lambda: 1.0, y_perp: vec![0.0; 6] };
        assert!(!zero_plane_conditions(&w).holds);
    }

    #[test]
    fn chain_bound_is_at_most_four() {
        for n in 0..=32 {
            let t = FRAC_PI_2 * n as f64 / 32.0;
            assert!(chain_bound(t) <= 4, "t = {t}");
        }
    }
}
