//! Cohomogeneity one group diagrams `H ⊂ {K₋, K₊} ⊂ G`, their Weyl groups,
//! isotropy lattices along the horizontal geodesic, and the vanishing-span
//! obstruction `k ≤ n − d − 1`.

mod dsl;
mod family;
mod subgroup;
mod weyl;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupElem, GroupError, GroupSpec};

pub use dsl::{parse_diagram, ParsedDiagram};
pub use family::{Expected, FAMILY_NAMES};
pub use family::{Family, FamilyParams};
pub use subgroup::{Shape, SubgroupDesc, MEMBER_TOL, SPAN_TOL};
pub use weyl::{
    all_weyl_generators, analyze, family_obstruction, find_weyl_generator, isotropy_lattice, lattice_prefix,
    obstruction_verdict, vanishing_span_dim, weyl_data, weyl_order, DiagramAnalysis, IsotropyLattice,
    ObstructionReport, WeylData, WeylOrder, DEFAULT_WEYL_CAP,
};

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("unsupported subgroup shape: {0}")]
    UnsupportedShape(String),
    #[error("no Weyl involution found in {slot}")]
    NoInvolutionFound { slot: String },
    #[error("Weyl group order exceeds cap {cap}")]
    Unbounded { cap: u32 },
    #[error("vanishing span dimension {d} out of range for n = {n}")]
    DimOutOfRange { n: usize, d: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{source} (diagram: {diagram})")]
    InDiagram { diagram: Box<GroupDiagram>, source: Box<DiagramError> },
}

impl DiagramError {
    pub(crate) fn attach(self, d: &GroupDiagram) -> DiagramError {
        match self {
            e @ DiagramError::InDiagram { .. } => e,
            e => DiagramError::InDiagram { diagram: Box::new(d.clone()), source: Box::new(e) },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDiagram {
    group: GroupSpec,
    h: SubgroupDesc,
    k_minus: SubgroupDesc,
    k_plus: SubgroupDesc,
    n: usize,
}

impl GroupDiagram {
    /// Validates inclusions and, if given, the manifold dimension.
    pub fn new(
        h: SubgroupDesc,
        k_minus: SubgroupDesc,
        k_plus: SubgroupDesc,
        n: Option<usize>,
    ) -> Result<Self, DiagramError> {
        let group = h.group().clone();
        group.check_same(k_minus.group())?;
        group.check_same(k_plus.group())?;
        for (name, k) in [("K-", &k_minus), ("K+", &k_plus)] {
            if !h.is_subgroup_of(k) {
                return Err(DiagramError::Invalid(format!("H is not contained in {name}")));
            }
        }
        let expected = group.dim() - h.dim() + 1;
        if let Some(n) = n {
            if n != expected {
                return Err(DiagramError::Invalid(format!("n = {n} but dim G - dim H + 1 = {expected}")));
            }
        }
        Ok(Self { group, h, k_minus, k_plus, n: expected })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn h(&self) -> &SubgroupDesc {
        &self.h
    }

    pub fn k_minus(&self) -> &SubgroupDesc {
        &self.k_minus
    }

    pub fn k_plus(&self) -> &SubgroupDesc {
        &self.k_plus
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The same diagram conjugated by one `a ∈ G`.
    pub fn conjugate(&self, a: &GroupElem) -> GroupDiagram {
        GroupDiagram {
            group: self.group.clone(),
            h: self.h.conjugate(a),
            k_minus: self.k_minus.conjugate(a),
            k_plus: self.k_plus.conjugate(a),
            n: self.n,
        }
    }

    pub fn swapped(&self) -> GroupDiagram {
        let mut d = self.clone();
        std::mem::swap(&mut d.k_minus, &mut d.k_plus);
        d
    }

    /// `aHa⁻¹ ⊂ {a n K₋ n⁻¹ a⁻¹, a K₊ a⁻¹}` with `n ∈ N(H)₀`.
    pub fn moved(&self, a: &GroupElem, n: &GroupElem, swap: bool) -> GroupDiagram {
        let mut d = self.clone();
        d.k_minus = d.k_minus.conjugate(n);
        let d = d.conjugate(a);
        if swap {
            d.swapped()
        } else {
            d
        }
    }

    /// A random equivalent diagram.
    pub fn sample_equivalent<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<GroupDiagram, DiagramError> {
        let n0 = self.h.normalizer_identity_component().map_err(|e| e.attach(self))?;
        let a = GroupElem::random(&self.group, rng);
        let n = n0.random_identity_component(rng);
        let swap = rng.random_bool(0.5);
        Ok(self.moved(&a, &n, swap))
    }
}

impl std::fmt::Display for GroupDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "G = {}, n = {}, H: {:?} dim {}, K-: {:?} dim {}, K+: {:?} dim {}",
            self.group,
            self.n,
            self.h.shape(),
            self.h.dim(),
            self.k_minus.shape(),
            self.k_minus.dim(),
            self.k_plus.shape(),
            self.k_plus.dim()
        )
    }
}
