//! Standard diagrams of the five, six and seven dimensional families.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{DiagramError, GroupDiagram, SubgroupDesc};
use crate::group::{FactorKind, GroupElem, GroupSpec};
use crate::quat::{ImUnit, Quat};

/// Integer parameters by name, e.g. `{"p": 1, "n": 1}`.
pub type FamilyParams = BTreeMap<String, i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Family {
    /// `1 ⊂ {(e^{iθ},1)}, {(e^{jdθ},e^{iθ})} ⊂ S³×S¹`.
    MD5 { d: i64 },
    /// `ℤ_n ⊂ {(e^{ipθ},e^{iθ})}, {(e^{ipθ},e^{iθ})} ⊂ S³×S¹`.
    QA5 { p: i64, n: i64 },
    /// `S¹×1 ⊂ S³×1, S³×1 ⊂ S³×S³`.
    S3S3Dim6,
    /// `⟨(i,i)⟩ ⊂ {(e^{ip₋θ},e^{iq₋θ})}, {(e^{jp₊θ},e^{jq₊θ})}·⟨(i,i)⟩ ⊂ S³×S³`.
    PA7 { p_minus: i64, q_minus: i64, p_plus: i64, q_plus: i64 },
    /// `ℤ_n ⊂ {(e^{ipθ},e^{iqθ})}, S³×ℤ_n ⊂ S³×S³`.
    NC7 { p: i64, q: i64, n: i64 },
    /// `S¹×1×1·ℤ_n ⊂ {(e^{iφ},e^{ibθ},e^{iθ})}, S³×1×1·ℤ_n ⊂ S³×S³×S¹`.
    QC7 { b: i64, n: i64 },
    /// `1 ⊂ S³×1, S³×1 ⊂ S³×S³`.
    S4S3,
    /// `{±1} ⊂ {e^{iθ}}, {e^{iθ}} ⊂ S³`, or with `{e^{jθ}}` as `K₊` when `second`.
    S2S2Example { second: bool },
}

/// Values quoted for the standard parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub max_d: usize,
    pub verdict: usize,
    /// Admissible Weyl orders; empty when not pinned.
    pub weyl_orders: Vec<u32>,
}

pub const FAMILY_NAMES: [&str; 8] = ["M_d5", "Q_A5", "S3S3_dim6", "P_A7", "N_C7", "Q_C7", "S4S3", "S2S2_example"];

fn get(params: &FamilyParams, key: &str, default: i64) -> i64 {
    params.get(key).copied().unwrap_or(default)
}

impl Family {
    /// Looks a family up by name; missing parameters take the standard values.
    pub fn from_name(name: &str, params: &FamilyParams) -> Result<Family, DiagramError> {
        let known: &[&str] = match name {
            "M_d5" => &["d"],
            "Q_A5" => &["p", "n"],
            "P_A7" => &["p_minus", "q_minus", "p_plus", "q_plus"],
            "N_C7" => &["p", "q", "n"],
            "Q_C7" => &["b", "n"],
            "S2S2_example" => &["second"],
            _ => &[],
        };
        if let Some(k) = params.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(DiagramError::Invalid(format!("unknown parameter {k} for {name}")));
        }
        Ok(match name {
            "M_d5" => Family::MD5 { d: get(params, "d", 2) },
            "Q_A5" => Family::QA5 { p: get(params, "p", 1), n: get(params, "n", 1) },
            "S3S3_dim6" => Family::S3S3Dim6,
            "P_A7" => Family::PA7 {
                p_minus: get(params, "p_minus", 1),
                q_minus: get(params, "q_minus", 1),
                p_plus: get(params, "p_plus", 1),
                q_plus: get(params, "q_plus", 1),
            },
            "N_C7" => Family::NC7 { p: get(params, "p", 1), q: get(params, "q", 1), n: get(params, "n", 1) },
            "Q_C7" => Family::QC7 { b: get(params, "b", 1), n: get(params, "n", 1) },
            "S4S3" => Family::S4S3,
            "S2S2_example" => Family::S2S2Example { second: get(params, "second", 0) != 0 },
            other => {
                return Err(DiagramError::Invalid(format!(
                    "unknown family {other}; expected one of {}",
                    FAMILY_NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::MD5 { .. } => "M_d5",
            Family::QA5 { .. } => "Q_A5",
            Family::S3S3Dim6 => "S3S3_dim6",
            Family::PA7 { .. } => "P_A7",
            Family::NC7 { .. } => "N_C7",
            Family::QC7 { .. } => "Q_C7",
            Family::S4S3 => "S4S3",
            Family::S2S2Example { .. } => "S2S2_example",
        }
    }

    pub fn params(&self) -> FamilyParams {
        let pairs: Vec<(&str, i64)> = match *self {
            Family::MD5 { d } => vec![("d", d)],
            Family::QA5 { p, n } => vec![("p", p), ("n", n)],
            Family::PA7 { p_minus, q_minus, p_plus, q_plus } => {
                vec![("p_minus", p_minus), ("q_minus", q_minus), ("p_plus", p_plus), ("q_plus", q_plus)]
            }
            Family::NC7 { p, q, n } => vec![("p", p), ("q", q), ("n", n)],
            Family::QC7 { b, n } => vec![("b", b), ("n", n)],
            Family::S2S2Example { second } => vec![("second", second as i64)],
            Family::S3S3Dim6 | Family::S4S3 => vec![],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// The table entry for this family, where the parameters are covered.
    pub fn expected(&self) -> Option<Expected> {
        let e = |max_d, verdict, w: &[u32]| Some(Expected { max_d, verdict, weyl_orders: w.to_vec() });
        match *self {
            Family::MD5 { d } if d % 2 == 0 => e(2, 2, &[4]),
            Family::QA5 { n: 1, .. } => e(2, 2, &[2]),
            Family::S3S3Dim6 => e(2, 3, &[2]),
            Family::PA7 { .. } => e(3, 3, &[4]),
            Family::NC7 { n: 1, .. } => e(4, 2, &[4, 2]),
            Family::QC7 { n: 1, .. } => e(3, 3, &[4]),
            Family::S4S3 => e(3, 3, &[2]),
            Family::S2S2Example { .. } => e(2, 1, &[]),
            _ => None,
        }
    }

    /// Builds the standard diagram. The notes record normalizations applied to
    /// the input (gcd reduction of circle slopes).
    pub fn build(&self) -> Result<(GroupDiagram, Vec<String>), DiagramError> {
        let mut notes = Vec::new();
        let mut circle = |g: &GroupSpec, dirs: &[Option<ImUnit>], slopes: &[i64]| {
            let (c, changed) = SubgroupDesc::circle(g, dirs, slopes)?;
            if changed {
                notes.push(format!("circle slopes {slopes:?} divided by their gcd"));
            }
            Ok::<_, DiagramError>(c)
        };
        let (i, j) = (Some(ImUnit::I), Some(ImUnit::J));
        let diagram = match *self {
            Family::MD5 { d } => {
                let g = spec(&[FactorKind::S3, FactorKind::S1]);
                let h = SubgroupDesc::trivial(&g);
                let km = circle(&g, &[i, None], &[1, 0])?;
                let kp = circle(&g, &[j, None], &[d, 1])?;
                GroupDiagram::new(h, km, kp, Some(5))?
            }
            Family::QA5 { p, n } => {
                positive("n", n)?;
                let g = spec(&[FactorKind::S3, FactorKind::S1]);
                let k = circle(&g, &[i, None], &[p, 1])?;
                let h = cyclic_in(&k, n)?;
                GroupDiagram::new(h, k.clone(), k, Some(5))?
            }
            Family::S3S3Dim6 => {
                let g = spec(&[FactorKind::S3, FactorKind::S3]);
                let h = circle(&g, &[i, None], &[1, 0])?;
                let k = SubgroupDesc::block(&g, 0)?;
                GroupDiagram::new(h, k.clone(), k, Some(6))?
            }
            Family::PA7 { p_minus, q_minus, p_plus, q_plus } => {
                if p_minus.rem_euclid(4) != 1 || q_minus.rem_euclid(4) != 1 {
                    return Err(DiagramError::Invalid("P_A7 needs p-, q- = 1 mod 4".into()));
                }
                let g = spec(&[FactorKind::S3, FactorKind::S3]);
                let h = SubgroupDesc::finite(&g, &[GroupElem::from_quats(&g, &[Quat::I, Quat::I])?])?;
                let km = circle(&g, &[i, i], &[p_minus, q_minus])?;
                let kp0 = circle(&g, &[j, j], &[p_plus, q_plus])?;
                let kp = SubgroupDesc::product(&[kp0, h.clone()])?;
                GroupDiagram::new(h, km, kp, Some(7))?
            }
            Family::NC7 { p, q, n } => {
                positive("n", n)?;
                if super::subgroup::gcd(q, n) != 1 {
                    return Err(DiagramError::Invalid(format!("N_C7 needs gcd(q, n) = 1, got q = {q}, n = {n}")));
                }
                let g = spec(&[FactorKind::S3, FactorKind::S3]);
                let km = circle(&g, &[i, i], &[p, q])?;
                let h = cyclic_in(&km, n)?;
                let zn = GroupElem::from_quats(&g, &[Quat::ONE, phase(TAU / n as f64)])?;
                let kp = SubgroupDesc::product(&[SubgroupDesc::block(&g, 0)?, SubgroupDesc::finite(&g, &[zn])?])?;
                GroupDiagram::new(h, km, kp, Some(7))?
            }
            Family::QC7 { b, n } => {
                positive("n", n)?;
                let g = spec(&[FactorKind::S3, FactorKind::S3, FactorKind::S1]);
                let h0 = circle(&g, &[i, None, None], &[1, 0, 0])?;
                let c = circle(&g, &[None, i, None], &[0, b, 1])?;
                let zn = cyclic_in(&c, n)?;
                let h = SubgroupDesc::product(&[h0.clone(), zn.clone()])?;
                let km = SubgroupDesc::product(&[h0, c])?;
                let kp = SubgroupDesc::product(&[SubgroupDesc::block(&g, 0)?, zn])?;
                GroupDiagram::new(h, km, kp, Some(7))?
            }
            Family::S4S3 => {
                let g = spec(&[FactorKind::S3, FactorKind::S3]);
                let k = SubgroupDesc::block(&g, 0)?;
                GroupDiagram::new(SubgroupDesc::trivial(&g), k.clone(), k, Some(7))?
            }
            Family::S2S2Example { second } => {
                let g = spec(&[FactorKind::S3]);
                let h = SubgroupDesc::finite(&g, &[GroupElem::from_quats(&g, &[-Quat::ONE])?])?;
                let km = circle(&g, &[i], &[1])?;
                let kp = circle(&g, &[if second { j } else { i }], &[1])?;
                GroupDiagram::new(h, km, kp, Some(4))?
            }
        };
        Ok((diagram, notes))
    }
}

fn spec(kinds: &[FactorKind]) -> GroupSpec {
    GroupSpec::new(kinds.to_vec()).expect("non-empty")
}

fn positive(name: &str, v: i64) -> Result<(), DiagramError> {
    if v < 1 {
        return Err(DiagramError::Invalid(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

fn phase(theta: f64) -> Quat {
    Quat::new(theta.cos(), theta.sin(), 0.0, 0.0)
}

/// The order-`n` subgroup of a circle.
fn cyclic_in(circle: &SubgroupDesc, n: i64) -> Result<SubgroupDesc, DiagramError> {
    let x = &circle.torus()[0];
    let gen = GroupElem::exp(&x.scale(TAU / n as f64));
    SubgroupDesc::finite(circle.group(), &[gen])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_standard_families_build() {
        for name in FAMILY_NAMES {
            let f = Family::from_name(name, &FamilyParams::new()).unwrap();
            let (d, notes) = f.build().unwrap();
            assert!(notes.is_empty());
            assert_eq!(f.name(), name);
            assert!(d.n() >= 4);
        }
    }

    #[test]
    fn pa7_rejects_bad_residues() {
        let f = Family::PA7 { p_minus: 3, q_minus: 1, p_plus: 1, q_plus: 1 };
        assert!(f.build().is_err());
    }

    #[test]
    fn unknown_names_and_params_are_rejected() {
        assert!(Family::from_name("P_B7", &FamilyParams::new()).is_err());
        let mut p = FamilyParams::new();
        p.insert("zz".into(), 1);
        assert!(Family::from_name("M_d5", &p).is_err());
    }

    #[test]
    fn gcd_reduction_is_noted() {
        let f = Family::PA7 { p_minus: 1, q_minus: 1, p_plus: 2, q_plus: 2 };
        let (_, notes) = f.build().unwrap();
        assert_eq!(notes.len(), 1);
    }

    #[test]
    fn nc7_checks_coprimality() {
        assert!(Family::NC7 { p: 1, q: 2, n: 2 }.build().is_err());
        assert!(Family::NC7 { p: 1, q: 1, n: 2 }.build().is_ok());
    }
}
