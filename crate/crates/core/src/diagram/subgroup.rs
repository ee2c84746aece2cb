//! Closed subgroups of `S³ × … × S¹` in the forms that occur in cohomogeneity one
//! group diagrams: full `S³` blocks, tori with integer slopes, and finite extensions.

use nalgebra::DVector;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::DiagramError;
use crate::group::{AlgVec, FactorKind, GroupElem, GroupSpec};
use crate::linalg::{orthonormal_basis, rank};
use crate::quat::{ImUnit, Quat};

/// Membership and equality tolerance for group elements.
pub const MEMBER_TOL: f64 = 1e-9;
/// Tolerance for span containment of Lie algebras.
pub const SPAN_TOL: f64 = 1e-9;

const MAX_COMPONENTS: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    Trivial,
    FiniteCyclic,
    Circle,
    /// Torus of rank two or more.
    Torus2,
    FullS3Block,
    BlockTimesFinite,
}

/// A closed subgroup `K = ⋃ c·K₀` where `K₀ = (∏ blocks S³) · exp(span torus)`.
///
/// Torus generators have period `2π` (integer slopes over unit directions) and
/// vanish on block factors. `coset_reps` lists one element per non-identity
/// component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgroupDesc {
    group: GroupSpec,
    blocks: Vec<usize>,
    torus: Vec<AlgVec>,
    coset_reps: Vec<GroupElem>,
}

impl SubgroupDesc {
    pub fn trivial(group: &GroupSpec) -> Self {
        Self { group: group.clone(), blocks: vec![], torus: vec![], coset_reps: vec![] }
    }

    /// The full `S³` in factor `f`.
    pub fn block(group: &GroupSpec, f: usize) -> Result<Self, DiagramError> {
        if group.factors().get(f) != Some(&FactorKind::S3) {
            return Err(DiagramError::Invalid(format!("factor {f} of {group} is not an S3")));
        }
        Ok(Self { group: group.clone(), blocks: vec![f], torus: vec![], coset_reps: vec![] })
    }

    /// `{exp(θ X)}` with `X_f = slope_f · dir_f` on `S³` factors and `slope_f · i` on
    /// circle factors. Slopes are divided by their gcd; the flag reports whether
    /// that changed them.
    pub fn circle(group: &GroupSpec, dirs: &[Option<ImUnit>], slopes: &[i64]) -> Result<(Self, bool), DiagramError> {
        if dirs.len() != group.len() || slopes.len() != group.len() {
            return Err(DiagramError::Invalid(format!("circle needs {} directions and slopes", group.len())));
        }
        let g = slopes.iter().fold(0i64, |acc, &s| gcd(acc, s.abs()));
        if g == 0 {
            return Err(DiagramError::Invalid("circle with all slopes zero".into()));
        }
        let mut x = AlgVec::zero(group);
        for (f, kind) in group.factors().iter().enumerate() {
            let s = (slopes[f] / g) as f64;
            match kind {
                FactorKind::S3 => {
                    if slopes[f] != 0 {
                        let d = dirs[f]
                            .ok_or_else(|| DiagramError::Invalid(format!("circle needs a direction in factor {f}")))?;
                        x.set_s3_part(f, d.quat().scale(s));
                    }
                }
                FactorKind::S1 => x.set_s1_part(f, s),
            }
        }
        let k = Self { group: group.clone(), blocks: vec![], torus: vec![x], coset_reps: vec![] };
        Ok((k, g != 1))
    }

    /// Finite group generated by `gens`.
    pub fn finite(group: &GroupSpec, gens: &[GroupElem]) -> Result<Self, DiagramError> {
        let mut k = Self::trivial(group);
        k.close_with(gens)?;
        Ok(k)
    }

    /// Subgroup generated by the given parts (their identity components commute).
    pub fn product(parts: &[SubgroupDesc]) -> Result<Self, DiagramError> {
        let first = parts.first().ok_or_else(|| DiagramError::Invalid("empty product".into()))?;
        let group = first.group.clone();
        let mut blocks: Vec<usize> = Vec::new();
        for p in parts {
            group.check_same(&p.group)?;
            for &b in &p.blocks {
                if !blocks.contains(&b) {
                    blocks.push(b);
                }
            }
        }
        blocks.sort_unstable();
        let mut torus: Vec<AlgVec> = Vec::new();
        for p in parts {
            for x in &p.torus {
                let mut y = x.clone();
                for &b in &blocks {
                    y.set_s3_part(b, Quat::ZERO);
                }
                if y.norm() < SPAN_TOL {
                    continue;
                }
                let mut trial: Vec<DVector<f64>> = torus.iter().map(to_dvec).collect();
                trial.push(to_dvec(&y));
                if rank(&trial, 1e-9) == trial.len() {
                    torus.push(y);
                }
            }
        }
        let mut k = Self { group, blocks, torus, coset_reps: vec![] };
        k.check_abelian_torus()?;
        let gens: Vec<GroupElem> = parts.iter().flat_map(|p| p.coset_reps.iter().cloned()).collect();
        k.close_with(&gens)?;
        Ok(k)
    }

    fn check_abelian_torus(&self) -> Result<(), DiagramError> {
        for (f, kind) in self.group.factors().iter().enumerate() {
            if *kind != FactorKind::S3 || self.blocks.contains(&f) {
                continue;
            }
            let parts: Vec<Quat> = self.torus.iter().map(|x| x.s3_part(f)).filter(|q| q.norm() > SPAN_TOL).collect();
            if let Some(u) = parts.first() {
                let u = u.normalized();
                for q in &parts[1..] {
                    let c = q.dot(u);
                    if (*q - u.scale(c)).norm() > SPAN_TOL {
                        return Err(DiagramError::Invalid(format!("torus generators do not commute in factor {f}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn torus(&self) -> &[AlgVec] {
        &self.torus
    }

    pub fn coset_reps(&self) -> &[GroupElem] {
        &self.coset_reps
    }

    /// Generators of the Lie algebra of the identity component.
    pub fn alg_generators(&self) -> Vec<AlgVec> {
        let mut out = Vec::new();
        for &b in &self.blocks {
            for q in [Quat::I, Quat::J, Quat::K] {
                let mut v = AlgVec::zero(&self.group);
                v.set_s3_part(b, q);
                out.push(v);
            }
        }
        out.extend(self.torus.iter().cloned());
        out
    }

    pub fn dim(&self) -> usize {
        3 * self.blocks.len() + self.torus.len()
    }

    /// Number of connected components.
    pub fn components(&self) -> usize {
        1 + self.coset_reps.len()
    }

    pub fn shape(&self) -> Shape {
        let finite = !self.coset_reps.is_empty();
        match (self.blocks.is_empty(), self.torus.len(), finite) {
            (false, _, true) => Shape::BlockTimesFinite,
            (false, _, false) => Shape::FullS3Block,
            (true, 0, false) => Shape::Trivial,
            (true, 0, true) => Shape::FiniteCyclic,
            (true, 1, _) => Shape::Circle,
            (true, _, _) => Shape::Torus2,
        }
    }

    /// Orthonormal basis of the Lie algebra.
    pub fn lie_algebra(&self) -> Result<Vec<AlgVec>, DiagramError> {
        let gens = self.alg_generators();
        let vecs: Vec<DVector<f64>> = gens.iter().map(to_dvec).collect();
        let basis = orthonormal_basis(&vecs, 1e-9);
        if basis.len() != gens.len() {
            return Err(DiagramError::Invalid("degenerate Lie algebra generators".into()));
        }
        Ok(basis.iter().map(|v| from_dvec(&self.group, v)).collect())
    }

    fn basis_dvecs(&self) -> Vec<DVector<f64>> {
        let vecs: Vec<DVector<f64>> = self.alg_generators().iter().map(to_dvec).collect();
        orthonormal_basis(&vecs, 1e-9)
    }

    /// Whether `v` lies in the Lie algebra.
    pub fn algebra_contains(&self, v: &AlgVec) -> bool {
        let mut r = to_dvec(v);
        for b in self.basis_dvecs() {
            let c = b.dot(&r);
            r -= b * c;
        }
        r.norm() < SPAN_TOL * v.norm().max(1.0)
    }

    /// Whether this Lie algebra contains `other`'s.
    pub fn span_contains(&self, other: &SubgroupDesc) -> bool {
        other.alg_generators().iter().all(|v| self.algebra_contains(v))
    }

    /// Membership in the identity component.
    pub fn identity_component_contains(&self, g: &GroupElem) -> bool {
        let spec = &self.group;
        let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
        for (f, kind) in spec.factors().iter().enumerate() {
            if self.blocks.contains(&f) {
                continue;
            }
            let gf = g.quat(f);
            match kind {
                FactorKind::S3 => {
                    let dir = self.torus.iter().map(|x| x.s3_part(f)).find(|q| q.norm() > SPAN_TOL);
                    match dir {
                        None => {
                            if gf.dist(Quat::ONE) > MEMBER_TOL {
                                return false;
                            }
                        }
                        Some(d) => {
                            let u = d.normalized();
                            let s = gf.dot(u);
                            let off_circle = gf - (Quat::ONE.scale(gf.w) + u.scale(s));
                            if off_circle.norm() > MEMBER_TOL {
                                return false;
                            }
                            let coeffs = self.torus.iter().map(|x| x.s3_part(f).dot(u)).collect();
                            rows.push((coeffs, s.atan2(gf.w)));
                        }
                    }
                }
                FactorKind::S1 => {
                    let coeffs: Vec<f64> = self.torus.iter().map(|x| x.s1_part(f)).collect();
                    if coeffs.iter().all(|c| c.abs() < SPAN_TOL) {
                        if gf.dist(Quat::ONE) > MEMBER_TOL {
                            return false;
                        }
                    } else {
                        rows.push((coeffs, gf.x.atan2(gf.w)));
                    }
                }
            }
        }
        let r = self.torus.len();
        if r == 0 {
            return true;
        }
        for angles in solve_torus_angles(&rows, r) {
            let x = self.torus.iter().zip(&angles).fold(AlgVec::zero(spec), |acc, (t, a)| acc.add(&t.scale(*a)));
            let e = GroupElem::exp(&x);
            let ok =
                (0..spec.len()).filter(|f| !self.blocks.contains(f)).all(|f| e.quat(f).dist(g.quat(f)) < MEMBER_TOL);
            if ok {
                return true;
            }
        }
        false
    }

    pub fn contains(&self, g: &GroupElem) -> bool {
        if self.identity_component_contains(g) {
            return true;
        }
        self.coset_reps.iter().any(|c| self.identity_component_contains(&c.inverse().mul(g)))
    }

    /// Adds the subgroup generated by `gens` modulo the identity component.
    fn close_with(&mut self, gens: &[GroupElem]) -> Result<(), DiagramError> {
        let id = GroupElem::identity(&self.group);
        let mut elems: Vec<GroupElem> = vec![id];
        elems.extend(self.coset_reps.iter().cloned());
        let mut gens: Vec<GroupElem> = gens.to_vec();
        gens.extend(self.coset_reps.iter().cloned());
        let mut i = 0;
        while i < elems.len() {
            for s in &gens {
                let cand = elems[i].mul(s);
                let known = elems.iter().any(|e| self.identity_component_contains(&e.inverse().mul(&cand)));
                if !known {
                    elems.push(cand);
                    if elems.len() > MAX_COMPONENTS {
                        return Err(DiagramError::Invalid(format!(
                            "more than {MAX_COMPONENTS} components; finite part is not finite?"
                        )));
                    }
                }
            }
            i += 1;
        }
        self.coset_reps = elems.into_iter().skip(1).collect();
        Ok(())
    }

    /// `a K a⁻¹`.
    pub fn conjugate(&self, a: &GroupElem) -> SubgroupDesc {
        SubgroupDesc {
            group: self.group.clone(),
            blocks: self.blocks.clone(),
            torus: self.torus.iter().map(|x| a.adjoint(x)).collect(),
            coset_reps: self.coset_reps.iter().map(|c| c.conjugated_by(a)).collect(),
        }
    }

    /// Equality as subgroups: mutual span containment and matching components.
    pub fn same_as(&self, other: &SubgroupDesc) -> bool {
        self.group == other.group
            && self.dim() == other.dim()
            && self.span_contains(other)
            && other.span_contains(self)
            && self.coset_reps.iter().all(|c| other.contains(c))
            && other.coset_reps.iter().all(|c| self.contains(c))
    }

    /// Whether `self ⊆ other`.
    pub fn is_subgroup_of(&self, other: &SubgroupDesc) -> bool {
        other.span_contains(self) && self.coset_reps.iter().all(|c| other.contains(c))
    }

    /// `g` normalizes this subgroup.
    pub fn normalized_by(&self, g: &GroupElem) -> bool {
        self.conjugate(g).same_as(self)
    }

    /// Haar-random element of the identity component.
    pub fn random_identity_component<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElem {
        let mut e = GroupElem::identity(&self.group);
        if !self.blocks.is_empty() {
            let r = GroupElem::random(&self.group, rng);
            let qs: Vec<Quat> =
                (0..self.group.len()).map(|f| if self.blocks.contains(&f) { r.quat(f) } else { e.quat(f) }).collect();
            e = GroupElem::from_quats(&self.group, &qs).expect("unit entries");
        }
        let x = self
            .torus
            .iter()
            .fold(AlgVec::zero(&self.group), |acc, t| acc.add(&t.scale(rng.random_range(0.0..std::f64::consts::TAU))));
        e.mul(&GroupElem::exp(&x))
    }

    /// Identity component of the normalizer `N(K)₀`, from per-factor rules
    /// (full factor, the circle through the constraints, or trivial) and checked by
    /// conjugating `self` with sampled elements.
    pub fn normalizer_identity_component(&self) -> Result<SubgroupDesc, DiagramError> {
        let spec = &self.group;
        let mut blocks = Vec::new();
        let mut torus = Vec::new();
        for (f, kind) in spec.factors().iter().enumerate() {
            match kind {
                FactorKind::S1 => torus.push(AlgVec::from_parts(spec, &axis_parts(spec, f, Quat::I))),
                FactorKind::S3 => {
                    if self.blocks.contains(&f) {
                        blocks.push(f);
                        continue;
                    }
                    let mut dirs: Vec<Quat> =
                        self.torus.iter().map(|x| x.s3_part(f)).filter(|q| q.norm() > SPAN_TOL).collect();
                    for c in &self.coset_reps {
                        let q = c.quat(f);
                        let im = Quat::imag(q.x, q.y, q.z);
                        if im.norm() > MEMBER_TOL {
                            dirs.push(im);
                        }
                    }
                    match dirs.first() {
                        None => blocks.push(f),
                        Some(d) => {
                            let u = d.normalized();
                            let parallel = dirs.iter().all(|q| {
                                let c = q.dot(u);
                                (*q - u.scale(c)).norm() < SPAN_TOL * q.norm().max(1.0)
                            });
                            if parallel {
                                torus.push(AlgVec::from_parts(spec, &axis_parts(spec, f, u)));
                            }
                        }
                    }
                }
            }
        }
        let n0 = SubgroupDesc { group: spec.clone(), blocks, torus, coset_reps: vec![] };
        let mut rng = crate::sampling::child_rng(0x6e6f726d, 0);
        for _ in 0..8 {
            let n = n0.random_identity_component(&mut rng);
            if !self.normalized_by(&n) {
                return Err(DiagramError::UnsupportedShape(format!(
                    "normalizer rule failed verification for {:?}",
                    self.shape()
                )));
            }
        }
        Ok(n0)
    }
}

fn axis_parts(spec: &GroupSpec, f: usize, q: Quat) -> Vec<Quat> {
    (0..spec.len()).map(|g| if g == f { q } else { Quat::ZERO }).collect()
}

pub(crate) fn to_dvec(v: &AlgVec) -> DVector<f64> {
    DVector::from_column_slice(v.coords())
}

pub(crate) fn from_dvec(spec: &GroupSpec, v: &DVector<f64>) -> AlgVec {
    AlgVec::from_coords(spec, v.iter().cloned().collect()).expect("matching dimension")
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// All angle vectors `θ ∈ [0, 2π)^r` (up to the lattice) solving
/// `Σ_a C[f][a] θ_a ≡ φ_f (mod 2π)` on an invertible subset of rows.
fn solve_torus_angles(rows: &[(Vec<f64>, f64)], r: usize) -> Vec<Vec<f64>> {
    use nalgebra::DMatrix;
    if rows.len() < r {
        return vec![];
    }
    let Some(subset) = independent_rows(rows, r) else {
        return vec![];
    };
    let c = DMatrix::from_fn(r, r, |i, j| rows[subset[i]].0[j]);
    let det = c.determinant();
    let Some(cinv) = c.clone().try_inverse() else {
        return vec![];
    };
    let span = (det.abs().round() as i64).max(1);
    let phases: Vec<f64> = subset.iter().map(|&i| rows[i].1).collect();
    let mut out = Vec::new();
    let total = span.pow(r as u32);
    for idx in 0..total {
        let mut rem = idx;
        let shift = DVector::from_fn(r, |i, _| {
            let m = rem % span;
            rem /= span;
            phases[i] + std::f64::consts::TAU * m as f64
        });
        let theta = &cinv * shift;
        out.push(theta.iter().cloned().collect());
    }
    out
}

fn independent_rows(rows: &[(Vec<f64>, f64)], r: usize) -> Option<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let mut trial: Vec<DVector<f64>> = chosen.iter().map(|&j| DVector::from_column_slice(&rows[j].0)).collect();
        trial.push(DVector::from_column_slice(&rows[i].0));
        if rank(&trial, 1e-9) == trial.len() {
            chosen.push(i);
            if chosen.len() == r {
                return Some(chosen);
            }
        }
    }
    None
}
