//! Weyl involutions, isotropy groups along the horizontal geodesic, and the
//! vanishing-span count.

use std::f64::consts::TAU;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::subgroup::to_dvec;
use super::{DiagramError, GroupDiagram, SubgroupDesc};
use crate::group::{AlgVec, GroupElem};
use crate::linalg::rank;
use crate::quat::{ImUnit, Quat};
use crate::sampling::child_rng;

pub const DEFAULT_WEYL_CAP: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeylOrder {
    Finite(u32),
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylData {
    pub u_minus: GroupElem,
    pub u_plus: GroupElem,
    pub order: WeylOrder,
    /// Geodesic period in units of `L`; equal to the Weyl order when finite.
    pub period_in_l: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotropyLattice {
    pub entries: Vec<(usize, SubgroupDesc)>,
}

impl IsotropyLattice {
    pub fn period(&self) -> usize {
        self.entries.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramAnalysis {
    pub weyl: WeylData,
    pub d: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub n: usize,
    /// `d` of the input diagram.
    pub base_d: usize,
    pub base_weyl_order: WeylOrder,
    /// `d` of each sampled equivalent diagram, in trial order.
    pub trial_ds: Vec<usize>,
    pub trial_weyl_orders: Vec<WeylOrder>,
    pub max_d: usize,
    /// `n − max_d − 1`, absent when nothing is ruled out.
    pub verdict: Option<usize>,
    pub trials: usize,
    pub seed: u64,
}

fn block_values(h: &SubgroupDesc, f: usize) -> Vec<Quat> {
    let mut dirs = vec![Quat::I, Quat::J, Quat::K];
    let mut hdirs: Vec<Quat> = h.torus().iter().map(|x| x.s3_part(f)).collect();
    hdirs.extend(h.coset_reps().iter().map(|c| {
        let q = c.quat(f);
        Quat::imag(q.x, q.y, q.z)
    }));
    for d in hdirs {
        if d.norm() < 1e-9 {
            continue;
        }
        let u = ImUnit::new(d.normalized()).expect("imaginary direction");
        let (a, b) = u.orthonormal_complement();
        dirs.extend([u.quat(), a.quat(), b.quat()]);
    }
    let mut out = vec![-Quat::ONE];
    for d in dirs {
        out.push(d);
        out.push(-d);
    }
    out.push(Quat::ONE);
    out
}

fn is_weyl_involution(u: &GroupElem, h: &SubgroupDesc) -> bool {
    !h.contains(u) && h.contains(&u.mul(u)) && h.normalized_by(u)
}

fn candidates(k: &SubgroupDesc, h: &SubgroupDesc) -> Result<Vec<GroupElem>, DiagramError> {
    let spec = k.group().clone();
    let id = GroupElem::identity(&spec);
    let mut reps = vec![id.clone()];
    reps.extend(k.coset_reps().iter().cloned());

    let mut block_elems = vec![id];
    for &f in k.blocks() {
        let mut next = Vec::new();
        for e in &block_elems {
            for q in block_values(h, f) {
                let mut qs: Vec<Quat> = (0..spec.len()).map(|g| e.quat(g)).collect();
                qs[f] = q;
                next.push(GroupElem::from_quats(&spec, &qs)?);
            }
        }
        block_elems = next;
    }

    let r = k.torus().len();
    let m: usize = match r {
        0 => 1,
        1 => 48,
        2 => 24,
        _ => 12,
    };
    let total = m.pow(r as u32);
    let mut out = Vec::with_capacity(reps.len() * block_elems.len() * total);
    for rep in &reps {
        for b in &block_elems {
            let base = rep.mul(b);
            for idx in 0..total {
                let mut rem = idx;
                let x = k.torus().iter().fold(AlgVec::zero(&spec), |acc, t| {
                    let a = TAU * (rem % m) as f64 / m as f64;
                    rem /= m;
                    acc.add(&t.scale(a))
                });
                out.push(base.mul(&GroupElem::exp(&x)));
            }
        }
    }
    Ok(out)
}

/// Finite verified search for `u ∈ K ∩ N(H)` with `u² ∈ H` and `u ∉ H`.
pub fn find_weyl_generator(k: &SubgroupDesc, h: &SubgroupDesc) -> Result<GroupElem, DiagramError> {
    candidates(k, h)?
        .into_iter()
        .find(|u| is_weyl_involution(u, h))
        .ok_or_else(|| DiagramError::NoInvolutionFound { slot: format!("{:?} over {:?}", k.shape(), h.shape()) })
}

/// Every verified candidate of the search, for checking that they agree modulo `H`.
pub fn all_weyl_generators(k: &SubgroupDesc, h: &SubgroupDesc) -> Result<Vec<GroupElem>, DiagramError> {
    Ok(candidates(k, h)?.into_iter().filter(|u| is_weyl_involution(u, h)).collect())
}

/// `|W| = 2m` for the least `m` with `(u₊u₋)^m ∈ H`.
pub fn weyl_order(u_minus: &GroupElem, u_plus: &GroupElem, h: &SubgroupDesc, cap: u32) -> WeylData {
    let c = u_plus.mul(u_minus);
    let mut p = c.clone();
    let mut order = WeylOrder::Unbounded;
    for m in 1..=cap {
        if h.contains(&p) {
            order = WeylOrder::Finite(2 * m);
            break;
        }
        p = p.mul(&c);
    }
    let period_in_l = match order {
        WeylOrder::Finite(o) => Some(o),
        WeylOrder::Unbounded => None,
    };
    WeylData { u_minus: u_minus.clone(), u_plus: u_plus.clone(), order, period_in_l }
}

pub fn weyl_data(diagram: &GroupDiagram, cap: u32) -> Result<WeylData, DiagramError> {
    let um = find_weyl_generator(diagram.k_minus(), diagram.h()).map_err(|e| relabel(e, "K-"))?;
    let up = find_weyl_generator(diagram.k_plus(), diagram.h()).map_err(|e| relabel(e, "K+"))?;
    Ok(weyl_order(&um, &up, diagram.h(), cap))
}

fn relabel(e: DiagramError, which: &str) -> DiagramError {
    match e {
        DiagramError::NoInvolutionFound { slot } => {
            DiagramError::NoInvolutionFound { slot: format!("{which} ({slot})") }
        }
        e => e,
    }
}

/// `G_{γ(kL)}` for one period: `c^j K₋ c^{-j}` at `k = 2j` and `c^j K₊ c^{-j}` at
/// `k = 2j + 1`, with `c = u₊u₋`.
pub fn isotropy_lattice(diagram: &GroupDiagram, weyl: &WeylData) -> Result<IsotropyLattice, DiagramError> {
    let WeylOrder::Finite(order) = weyl.order else {
        return Err(DiagramError::Unbounded { cap: DEFAULT_WEYL_CAP });
    };
    Ok(lattice_prefix(diagram, weyl, order as usize))
}

/// The first `len` isotropy groups along the geodesic, periodic or not.
pub fn lattice_prefix(diagram: &GroupDiagram, weyl: &WeylData, len: usize) -> IsotropyLattice {
    let c = weyl.u_plus.mul(&weyl.u_minus);
    let mut cj = GroupElem::identity(diagram.group());
    let mut entries = Vec::with_capacity(len);
    for k in 0..len {
        if k > 0 && k % 2 == 0 {
            cj = c.mul(&cj);
        }
        let base = if k % 2 == 0 { diagram.k_minus() } else { diagram.k_plus() };
        entries.push((k, base.conjugate(&cj)));
    }
    IsotropyLattice { entries }
}

/// Rank of `⋃ 𝔨_{γ(kL)}` after projecting off `𝔥`.
pub fn vanishing_span_dim(lattice: &IsotropyLattice, h: &SubgroupDesc) -> usize {
    let hb: Vec<DVector<f64>> = match h.lie_algebra() {
        Ok(b) => b.iter().map(to_dvec).collect(),
        Err(_) => vec![],
    };
    let mut vecs = Vec::new();
    for (_, k) in &lattice.entries {
        for v in k.alg_generators() {
            let mut r = to_dvec(&v);
            for b in &hb {
                let c = b.dot(&r);
                r -= b * c;
            }
            vecs.push(r);
        }
    }
    rank(&vecs, 1e-9)
}

/// Largest `k` ruled out: `n − d − 1`.
pub fn obstruction_verdict(n: usize, d: usize) -> Result<usize, DiagramError> {
    if d + 1 > n {
        return Err(DiagramError::DimOutOfRange { n, d });
    }
    Ok(n - d - 1)
}

pub fn analyze(diagram: &GroupDiagram) -> Result<DiagramAnalysis, DiagramError> {
    let run = || -> Result<DiagramAnalysis, DiagramError> {
        let weyl = weyl_data(diagram, DEFAULT_WEYL_CAP)?;
        // An infinite Weyl group still has a finite-dimensional span; a long
        // prefix of the lattice reaches it.
        let lattice = match weyl.order {
            WeylOrder::Finite(_) => isotropy_lattice(diagram, &weyl)?,
            WeylOrder::Unbounded => lattice_prefix(diagram, &weyl, 2 * DEFAULT_WEYL_CAP as usize),
        };
        let d = vanishing_span_dim(&lattice, diagram.h());
        obstruction_verdict(diagram.n(), d)?;
        Ok(DiagramAnalysis { weyl, d })
    };
    run().map_err(|e| e.attach(diagram))
}

/// Runs the pipeline on `diagram` and on `trials` random equivalent diagrams.
/// Trial `t` draws from stream `t` of `seed`, so results do not depend on
/// thread scheduling.
pub fn family_obstruction(diagram: &GroupDiagram, trials: usize, seed: u64) -> Result<ObstructionReport, DiagramError> {
    let base = analyze(diagram)?;
    let results: Vec<DiagramAnalysis> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = child_rng(seed, t as u64);
            let eq = diagram.sample_equivalent(&mut rng)?;
            analyze(&eq)
        })
        .collect::<Result<_, _>>()?;
    let trial_ds: Vec<usize> = results.iter().map(|a| a.d).collect();
    let max_d = trial_ds.iter().cloned().fold(base.d, usize::max);
    let n = diagram.n();
    let k = obstruction_verdict(n, max_d)?;
    Ok(ObstructionReport {
        n,
        base_d: base.d,
        base_weyl_order: base.weyl.order,
        trial_ds,
        trial_weyl_orders: results.iter().map(|a| a.weyl.order).collect(),
        max_d,
        verdict: (k > 0).then_some(k),
        trials,
        seed,
    })
}
