//! Quaternion arithmetic on ℍ = span{1, i, j, k}.
//!
//! Unit quaternions model `S³ ≅ Sp(1)`; imaginary quaternions model its Lie
//! algebra `sp(1)`, where the bracket is `[u, v] = uv − vu = 2 u × v`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Tolerance for unit-norm and membership checks on group data.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const ONE: Quat = Quat::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quat = Quat::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quat = Quat::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quat = Quat::new(0.0, 0.0, 0.0, 1.0);
    pub const ZERO: Quat = Quat::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn imag(x: f64, y: f64, z: f64) -> Self {
        Self { w: 0.0, x, y, z }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Imaginary part as a 3-vector in the basis {i, j, k}.
    pub fn im(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn normalized(self) -> Self {
        self.scale(1.0 / self.norm())
    }

    pub fn inverse(self) -> Self {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    /// Euclidean pairing on ℍ ≅ ℝ⁴.
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn is_unit(self) -> bool {
        (self.norm() - 1.0).abs() < UNIT_TOL
    }

    pub fn is_imaginary(self) -> bool {
        self.w.abs() < UNIT_TOL
    }
}

impl Default for Quat {
    fn default() -> Self {
        Quat::ONE
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:+.6} {:+.6}i {:+.6}j {:+.6}k)", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, o: Quat) -> Quat {
        Quat::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, o: Quat) -> Quat {
        Quat::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quat {
    type Output = Quat;
    fn mul(self, q: Quat) -> Quat {
        let p = self;
        Quat::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

pub fn quat_mul(p: Quat, q: Quat) -> Quat {
    p * q
}

/// A unit imaginary quaternion: a direction in `Im(ℍ) ∩ S³`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Quat", into = "Quat")]
pub struct ImUnit(Quat);

impl std::ops::Neg for ImUnit {
    type Output = ImUnit;

    fn neg(self) -> ImUnit {
        ImUnit(-self.0)
    }
}

impl ImUnit {
    pub const I: ImUnit = ImUnit(Quat::I);
    pub const J: ImUnit = ImUnit(Quat::J);
    pub const K: ImUnit = ImUnit(Quat::K);

    /// Normalizes the imaginary part of `q`; `None` when it vanishes.
    pub fn new(q: Quat) -> Option<Self> {
        let v = Quat::imag(q.x, q.y, q.z);
        let n = v.norm();
        (n > 1e-14).then(|| ImUnit(v.scale(1.0 / n)))
    }

    pub fn from_xyz(x: f64, y: f64, z: f64) -> Option<Self> {
        Self::new(Quat::imag(x, y, z))
    }

    pub fn quat(self) -> Quat {
        self.0
    }

    /// Two unit imaginaries completing `self` to a right-handed orthonormal frame.
    pub fn orthonormal_complement(self) -> (ImUnit, ImUnit) {
        let a = self.0.im();
        // pick the basis axis least aligned with a
        let mut axis = [0.0; 3];
        let idx = (0..3).min_by(|&p, &q| a[p].abs().partial_cmp(&a[q].abs()).unwrap()).unwrap();
        axis[idx] = 1.0;
        let b = normalize3(cross3(a, axis));
        let c = cross3(a, b);
        (ImUnit(Quat::imag(b[0], b[1], b[2])), ImUnit(Quat::imag(c[0], c[1], c[2])))
    }
}

impl TryFrom<Quat> for ImUnit {
    type Error = String;
    fn try_from(q: Quat) -> Result<Self, Self::Error> {
        if !q.is_imaginary() || !q.is_unit() {
            return Err(format!("{q} is not a unit imaginary quaternion"));
        }
        Ok(ImUnit(q))
    }
}

impl From<ImUnit> for Quat {
    fn from(u: ImUnit) -> Quat {
        u.0
    }
}

/// `cos θ + x sin θ`, the one-parameter subgroup through `x`.
pub fn exp_dir(x: ImUnit, theta: f64) -> Quat {
    let (s, c) = theta.sin_cos();
    Quat::ONE.scale(c) + x.0.scale(s)
}

/// Exponential of an arbitrary imaginary quaternion.
pub fn exp_imag(v: Quat) -> Quat {
    let v = Quat::imag(v.x, v.y, v.z);
    let n = v.norm();
    if n < 1e-300 {
        return Quat::ONE;
    }
    let (s, c) = n.sin_cos();
    Quat::ONE.scale(c) + v.scale(s / n)
}

/// `a x a⁻¹` for unit `a`.
pub fn rot_conj(a: Quat, x: Quat) -> Quat {
    a * x * a.conj()
}

pub(crate) fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn normalize3(a: [f64; 3]) -> [f64; 3] {
    let n = dot3(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    use proptest::prelude::*;

    use super::*;

    fn close(a: Quat, b: Quat, tol: f64) -> bool {
        a.dist(b) < tol
    }

    #[test]
    fn multiplication_table() {
        assert_eq!(Quat::I * Quat::J, Quat::K);
        assert_eq!(Quat::J * Quat::K, Quat::I);
        assert_eq!(Quat::K * Quat::I, Quat::J);
        assert_eq!(Quat::I * Quat::I, -Quat::ONE);
        let q = Quat::new(0.3, -1.0, 2.0, 0.5);
        assert_eq!(Quat::ONE * q, q);
    }

    #[test]
    fn exp_dir_values() {
        assert!(close(exp_dir(ImUnit::I, PI), -Quat::ONE, 1e-15));
        assert!(close(exp_dir(ImUnit::J, FRAC_PI_2), Quat::J, 1e-15));
        let x = ImUnit::from_xyz(0.2, -0.4, 0.9).unwrap();
        assert_eq!(exp_dir(x, 0.0), Quat::ONE);
    }

    #[test]
    fn rot_conj_values() {
        assert!(close(rot_conj(Quat::J, Quat::I), -Quat::I, 1e-15));
        let q = Quat::new(0.1, 0.2, 0.3, 0.4);
        assert_eq!(rot_conj(Quat::ONE, q), q);
        // e^{iπ/4} j e^{-iπ/4} = (c + s i) j (c - s i) = (c² - s²) j + 2cs k = k
        let a = exp_dir(ImUnit::I, FRAC_PI_4);
        assert!(close(rot_conj(a, Quat::J), Quat::K, 1e-15));
    }

    #[test]
    fn complement_is_orthonormal() {
        let x = ImUnit::from_xyz(0.3, 0.9, -0.1).unwrap();
        let (b, c) = x.orthonormal_complement();
        assert!(x.quat().dot(b.quat()).abs() < 1e-14);
        assert!(x.quat().dot(c.quat()).abs() < 1e-14);
        assert!(b.quat().dot(c.quat()).abs() < 1e-14);
        assert!(close(x.quat() * b.quat(), c.quat(), 1e-14));
    }

    #[test]
    fn im_unit_rejects_non_units_on_deserialize() {
        let bad: Result<ImUnit, _> = serde_json::from_str(r#"{"w":0.0,"x":2.0,"y":0.0,"z":0.0}"#);
        assert!(bad.is_err());
    }

    fn unit_quat() -> impl Strategy<Value = Quat> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
            .prop_filter("nonzero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-3)
            .prop_map(|(a, b, c, d)| Quat::new(a, b, c, d).normalized())
    }

    fn im_unit() -> impl Strategy<Value = ImUnit> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_filter_map("nonzero", |(a, b, c)| {
            (a * a + b * b + c * c > 1e-3).then(|| ImUnit::from_xyz(a, b, c).unwrap())
        })
    }

    proptest! {
        #[test]
        fn unit_products_stay_unit(p in unit_quat(), q in unit_quat()) {
            prop_assert!(((p * q).norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn conjugation_is_anti_automorphism(p in unit_quat(), q in unit_quat()) {
            prop_assert!(close((p * q).conj(), q.conj() * p.conj(), 1e-12));
        }

        #[test]
        fn exp_dir_is_homomorphism(x in im_unit(), a in -10.0..10.0f64, b in -10.0..10.0f64) {
            prop_assert!(close(exp_dir(x, a) * exp_dir(x, b), exp_dir(x, a + b), 1e-12));
        }

        #[test]
        fn rot_conj_is_isometry_of_imaginaries(a in unit_quat(), u in im_unit(), v in im_unit()) {
            let (ru, rv) = (rot_conj(a, u.quat()), rot_conj(a, v.quat()));
            prop_assert!(ru.w.abs() < 1e-12);
            prop_assert!((ru.dot(rv) - u.quat().dot(v.quat())).abs() < 1e-12);
        }
    }
}
