//! Products of `S³` and `S¹` factors, their elements and Lie algebras.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quat::{cross3, exp_imag, rot_conj, Quat, UNIT_TOL};
use crate::sampling::standard_normal;

#[derive(Debug, Error, PartialEq)]
pub enum GroupError {
    #[error("group mismatch: {left} vs {right}")]
    SpecMismatch { left: GroupSpec, right: GroupSpec },
    #[error("group must have at least one factor")]
    Empty,
    #[error("factor {index}: {reason}")]
    BadFactor { index: usize, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    S3,
    S1,
}

impl FactorKind {
    pub fn dim(self) -> usize {
        match self {
            FactorKind::S3 => 3,
            FactorKind::S1 => 1,
        }
    }
}

/// Ordered list of factors, e.g. `S3 x S3 x S1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<FactorKind>", into = "Vec<FactorKind>")]
pub struct GroupSpec(Vec<FactorKind>);

impl GroupSpec {
    pub fn new(factors: Vec<FactorKind>) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Err(GroupError::Empty);
        }
        Ok(Self(factors))
    }

    pub fn factors(&self) -> &[FactorKind] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.iter().map(|f| f.dim()).sum()
    }

    /// Offset of factor `f` inside an [`AlgVec`]'s coordinates.
    pub fn offset(&self, f: usize) -> usize {
        self.0[..f].iter().map(|k| k.dim()).sum()
    }

    pub fn check_same(&self, other: &GroupSpec) -> Result<(), GroupError> {
        if self == other {
            Ok(())
        } else {
            Err(GroupError::SpecMismatch { left: self.clone(), right: other.clone() })
        }
    }
}

impl TryFrom<Vec<FactorKind>> for GroupSpec {
    type Error = GroupError;
    fn try_from(v: Vec<FactorKind>) -> Result<Self, GroupError> {
        GroupSpec::new(v)
    }
}

impl From<GroupSpec> for Vec<FactorKind> {
    fn from(g: GroupSpec) -> Self {
        g.0
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self
            .0
            .iter()
            .map(|k| match k {
                FactorKind::S3 => "S3",
                FactorKind::S1 => "S1",
            })
            .collect();
        write!(f, "{}", names.join(" x "))
    }
}

/// A unit complex number `re + i·im`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub re: f64,
    pub im: f64,
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, o: Phase) -> Phase {
        Phase { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

impl Phase {
    pub const ONE: Phase = Phase { re: 1.0, im: 0.0 };

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Phase { re: c, im: s }
    }

    pub fn angle(self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn conj(self) -> Phase {
        Phase { re: self.re, im: -self.im }
    }

    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    fn renormalized(self) -> Phase {
        let n = self.norm();
        Phase { re: self.re / n, im: self.im / n }
    }

    pub fn dist(self, o: Phase) -> f64 {
        (self.re - o.re).hypot(self.im - o.im)
    }
}

/// One entry of a [`GroupElem`]; circle entries cannot carry `j`/`k` parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum FactorElem {
    S3(Quat),
    S1(Phase),
}

impl FactorElem {
    pub fn kind(self) -> FactorKind {
        match self {
            FactorElem::S3(_) => FactorKind::S3,
            FactorElem::S1(_) => FactorKind::S1,
        }
    }

    /// Embeds a circle entry into ℍ as `re + im·i`.
    pub fn as_quat(self) -> Quat {
        match self {
            FactorElem::S3(q) => q,
            FactorElem::S1(p) => Quat::new(p.re, p.im, 0.0, 0.0),
        }
    }

    fn dist(self, o: FactorElem) -> f64 {
        self.as_quat().dist(o.as_quat())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElem(Vec<FactorElem>);

impl GroupElem {
    pub fn new(entries: Vec<FactorElem>) -> Result<Self, GroupError> {
        if entries.is_empty() {
            return Err(GroupError::Empty);
        }
        for (index, e) in entries.iter().enumerate() {
            let n = e.as_quat().norm();
            if (n - 1.0).abs() > 1e-9 {
                return Err(GroupError::BadFactor { index, reason: format!("norm {n} is not 1") });
            }
        }
        Ok(Self(entries).renormalized())
    }

    /// Builds an element from quaternion entries; circle factors use the `1, i` part
    /// and reject non-zero `j`, `k` components.
    pub fn from_quats(spec: &GroupSpec, qs: &[Quat]) -> Result<Self, GroupError> {
        if qs.len() != spec.len() {
            return Err(GroupError::BadFactor {
                index: qs.len().min(spec.len()),
                reason: format!("expected {} entries, got {}", spec.len(), qs.len()),
            });
        }
        let mut out = Vec::with_capacity(qs.len());
        for (index, (kind, q)) in spec.factors().iter().zip(qs).enumerate() {
            match kind {
                FactorKind::S3 => out.push(FactorElem::S3(*q)),
                FactorKind::S1 => {
                    if q.y.abs() > UNIT_TOL || q.z.abs() > UNIT_TOL {
                        return Err(GroupError::BadFactor {
                            index,
                            reason: "circle entries must lie in span{1, i}".into(),
                        });
                    }
                    out.push(FactorElem::S1(Phase { re: q.w, im: q.x }));
                }
            }
        }
        Self::new(out)
    }

    pub fn identity(spec: &GroupSpec) -> Self {
        Self(
            spec.factors()
                .iter()
                .map(|k| match k {
                    FactorKind::S3 => FactorElem::S3(Quat::ONE),
                    FactorKind::S1 => FactorElem::S1(Phase::ONE),
                })
                .collect(),
        )
    }

    /// Haar-uniform sample.
    pub fn random<R: Rng + ?Sized>(spec: &GroupSpec, rng: &mut R) -> Self {
        Self(
            spec.factors()
                .iter()
                .map(|k| match k {
                    FactorKind::S3 => loop {
                        let q = Quat::new(
                            standard_normal(rng),
                            standard_normal(rng),
                            standard_normal(rng),
                            standard_normal(rng),
                        );
                        if q.norm() > 1e-6 {
                            break FactorElem::S3(q.normalized());
                        }
                    },
                    FactorKind::S1 => FactorElem::S1(Phase::from_angle(rng.random_range(0.0..std::f64::consts::TAU))),
                })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[FactorElem] {
        &self.0
    }

    pub fn spec(&self) -> GroupSpec {
        GroupSpec(self.0.iter().map(|e| e.kind()).collect())
    }

    pub fn quat(&self, f: usize) -> Quat {
        self.0[f].as_quat()
    }

    fn renormalized(self) -> Self {
        Self(
            self.0
                .into_iter()
                .map(|e| match e {
                    FactorElem::S3(q) => FactorElem::S3(q.normalized()),
                    FactorElem::S1(p) => FactorElem::S1(p.renormalized()),
                })
                .collect(),
        )
    }

    /// Group product, renormalized per factor.
    pub fn mul(&self, other: &GroupElem) -> GroupElem {
        debug_assert_eq!(self.0.len(), other.0.len());
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| match (a, b) {
                    (FactorElem::S3(p), FactorElem::S3(q)) => FactorElem::S3(*p * *q),
                    (FactorElem::S1(p), FactorElem::S1(q)) => FactorElem::S1(*p * *q),
                    _ => panic!("factor kind mismatch in group product"),
                })
                .collect(),
        )
        .renormalized()
    }

    pub fn inverse(&self) -> GroupElem {
        Self(
            self.0
                .iter()
                .map(|e| match e {
                    FactorElem::S3(q) => FactorElem::S3(q.conj()),
                    FactorElem::S1(p) => FactorElem::S1(p.conj()),
                })
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> GroupElem {
        let mut out = GroupElem::identity(&self.spec());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `a g a⁻¹`.
    pub fn conjugated_by(&self, a: &GroupElem) -> GroupElem {
        a.mul(self).mul(&a.inverse())
    }

    /// Largest per-factor distance in ℍ.
    pub fn dist(&self, other: &GroupElem) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.dist(*b)).fold(0.0, f64::max)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.dist(&GroupElem::identity(&self.spec())) < tol
    }

    /// `exp(v)`, factor by factor.
    pub fn exp(v: &AlgVec) -> GroupElem {
        let spec = &v.spec;
        Self(
            spec.factors()
                .iter()
                .enumerate()
                .map(|(f, k)| match k {
                    FactorKind::S3 => FactorElem::S3(exp_imag(v.s3_part(f))),
                    FactorKind::S1 => FactorElem::S1(Phase::from_angle(v.s1_part(f))),
                })
                .collect(),
        )
    }

    /// Adjoint action `Ad_a v = a v a⁻¹`; trivial on circle factors.
    pub fn adjoint(&self, v: &AlgVec) -> AlgVec {
        let mut out = v.clone();
        for (f, e) in self.0.iter().enumerate() {
            if let FactorElem::S3(a) = e {
                out.set_s3_part(f, rot_conj(*a, v.s3_part(f)));
            }
        }
        out
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.as_quat().to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Element of the Lie algebra in the fixed basis: `{i, j, k}` per `sp(1)` factor,
/// `{i}` per circle factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgVec {
    spec: GroupSpec,
    coords: Vec<f64>,
}

impl AlgVec {
    pub fn zero(spec: &GroupSpec) -> Self {
        Self { spec: spec.clone(), coords: vec![0.0; spec.dim()] }
    }

    pub fn from_coords(spec: &GroupSpec, coords: Vec<f64>) -> Result<Self, GroupError> {
        if coords.len() != spec.dim() {
            return Err(GroupError::BadFactor {
                index: 0,
                reason: format!("expected {} coordinates, got {}", spec.dim(), coords.len()),
            });
        }
        Ok(Self { spec: spec.clone(), coords })
    }

    pub fn basis(spec: &GroupSpec, index: usize) -> Self {
        let mut v = Self::zero(spec);
        v.coords[index] = 1.0;
        v
    }

    /// Builds a vector from per-factor quaternion components (imaginary parts for
    /// `S³`, the `i` coefficient for circles).
    pub fn from_parts(spec: &GroupSpec, parts: &[Quat]) -> Self {
        let mut v = Self::zero(spec);
        for (f, q) in parts.iter().enumerate() {
            match spec.factors()[f] {
                FactorKind::S3 => v.set_s3_part(f, *q),
                FactorKind::S1 => v.set_s1_part(f, q.x),
            }
        }
        v
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn s3_part(&self, f: usize) -> Quat {
        let o = self.spec.offset(f);
        Quat::imag(self.coords[o], self.coords[o + 1], self.coords[o + 2])
    }

    pub fn s1_part(&self, f: usize) -> f64 {
        self.coords[self.spec.offset(f)]
    }

    /// Factor `f` as an imaginary quaternion (circle parts land on `i`).
    pub fn part(&self, f: usize) -> Quat {
        match self.spec.factors()[f] {
            FactorKind::S3 => self.s3_part(f),
            FactorKind::S1 => Quat::imag(self.s1_part(f), 0.0, 0.0),
        }
    }

    pub fn set_s3_part(&mut self, f: usize, q: Quat) {
        let o = self.spec.offset(f);
        self.coords[o] = q.x;
        self.coords[o + 1] = q.y;
        self.coords[o + 2] = q.z;
    }

    pub fn set_s1_part(&mut self, f: usize, t: f64) {
        let o = self.spec.offset(f);
        self.coords[o] = t;
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { spec: self.spec.clone(), coords: self.coords.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, o: &AlgVec) -> Self {
        Self { spec: self.spec.clone(), coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &AlgVec) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Component-wise `sp(1)` bracket; zero on circle components.
    pub fn bracket(&self, o: &AlgVec) -> Result<AlgVec, GroupError> {
        self.spec.check_same(&o.spec)?;
        let mut out = AlgVec::zero(&self.spec);
        for (f, k) in self.spec.factors().iter().enumerate() {
            if *k == FactorKind::S3 {
                let c = cross3(self.s3_part(f).im(), o.s3_part(f).im());
                out.set_s3_part(f, Quat::imag(2.0 * c[0], 2.0 * c[1], 2.0 * c[2]));
            }
        }
        Ok(out)
    }

    /// Euclidean pairing in the fixed basis (the bi-invariant metric `Q`).
    pub fn inner(&self, o: &AlgVec) -> Result<f64, GroupError> {
        self.spec.check_same(&o.spec)?;
        Ok(self.coords.iter().zip(&o.coords).map(|(a, b)| a * b).sum())
    }
}

pub fn alg_bracket(u: &AlgVec, v: &AlgVec) -> Result<AlgVec, GroupError> {
    u.bracket(v)
}

pub fn alg_inner(u: &AlgVec, v: &AlgVec) -> Result<f64, GroupError> {
    u.inner(v)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn s3s3() -> GroupSpec {
        GroupSpec::new(vec![FactorKind::S3, FactorKind::S3]).unwrap()
    }

    fn s3s1() -> GroupSpec {
        GroupSpec::new(vec![FactorKind::S3, FactorKind::S1]).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let g = s3s3();
        let u = AlgVec::from_parts(&g, &[Quat::I, Quat::ZERO]);
        let v = AlgVec::from_parts(&g, &[Quat::J, Quat::ZERO]);
        let w = u.bracket(&v).unwrap();
        assert_eq!(w, AlgVec::from_parts(&g, &[Quat::K.scale(2.0), Quat::ZERO]));
        assert_eq!(u.inner(&v).unwrap(), 0.0);

        let h = s3s1();
        let c = AlgVec::from_parts(&h, &[Quat::ZERO, Quat::I]);
        assert_eq!(c.bracket(&c).unwrap(), AlgVec::zero(&h));
    }

    #[test]
    fn mismatched_specs_error() {
        let u = AlgVec::basis(&s3s3(), 0);
        let v = AlgVec::basis(&s3s1(), 0);
        assert!(matches!(u.bracket(&v), Err(GroupError::SpecMismatch { .. })));
        assert!(u.inner(&v).is_err());
    }

    #[test]
    fn circle_entries_reject_jk() {
        let g = s3s1();
        assert!(GroupElem::from_quats(&g, &[Quat::J, Quat::J]).is_err());
        assert!(GroupElem::from_quats(&g, &[Quat::J, Quat::I]).is_ok());
        assert!(GroupSpec::new(vec![]).is_err());
    }

    #[test]
    fn exp_and_adjoint_agree_with_conjugation() {
        let g = s3s1();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = GroupElem::random(&g, &mut rng);
        let v = AlgVec::from_coords(&g, vec![0.3, -0.2, 0.5, 0.7]).unwrap();
        let lhs = GroupElem::exp(&v).conjugated_by(&a);
        let rhs = GroupElem::exp(&a.adjoint(&v));
        assert!(lhs.dist(&rhs) < 1e-12);
    }

    #[test]
    fn spec_serde_rejects_empty() {
        assert!(serde_json::from_str::<GroupSpec>("[]").is_err());
        let g: GroupSpec = serde_json::from_str(r#"["S3","S1"]"#).unwrap();
        assert_eq!(g.dim(), 4);
    }

    fn alg(spec: GroupSpec) -> impl Strategy<Value = AlgVec> {
        prop::collection::vec(-2.0..2.0f64, spec.dim()).prop_map(move |c| AlgVec::from_coords(&spec, c).unwrap())
    }

    proptest! {
        #[test]
        fn jacobi_identity(x in alg(s3s3()), y in alg(s3s3()), z in alg(s3s3())) {
            let a = x.bracket(&y.bracket(&z).unwrap()).unwrap();
            let b = y.bracket(&z.bracket(&x).unwrap()).unwrap();
            let c = z.bracket(&x.bracket(&y).unwrap()).unwrap();
            prop_assert!(a.add(&b).add(&c).norm() < 1e-12);
        }

        #[test]
        fn adjoint_preserves_inner(seed in 0u64..1000, x in alg(s3s1()), y in alg(s3s1())) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = GroupElem::random(&s3s1(), &mut rng);
            let lhs = a.adjoint(&x).inner(&a.adjoint(&y)).unwrap();
            prop_assert!((lhs - x.inner(&y).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn products_stay_unit(s1 in 0u64..500, s2 in 0u64..500) {
            let g = s3s1();
            let a = GroupElem::random(&g, &mut ChaCha8Rng::seed_from_u64(s1));
            let b = GroupElem::random(&g, &mut ChaCha8Rng::seed_from_u64(s2 + 7919));
            let c = a.mul(&b);
            for e in c.entries() {
                prop_assert!((e.as_quat().norm() - 1.0).abs() < 1e-12);
            }
        }
    }
}
