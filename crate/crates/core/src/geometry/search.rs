//! Minimizing the Ky Fan `k`-sum of `R_x` over unit directions `x`.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chart::MetricField;
use super::curvature::{curvature, CurvatureAtPoint};
use super::dirop::{directional_operator, ksum_min};
use super::GeometryError;
use crate::linalg::gram_orthonormal_basis;
use crate::sampling::SphereSequence;

/// Step sizes of the coordinate descent polish on the direction sphere.
pub const REFINE_STEPS: [f64; 5] = [0.1, 0.03, 0.01, 0.003, 0.001];
const MAX_SWEEPS: usize = 200;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RicKReport {
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    /// Best value among the raw samples, before refinement.
    pub sampled_min: f64,
    pub min_ksum: f64,
    /// Minimizing direction in chart coordinates, metric-unit.
    pub direction: Vec<f64>,
    /// Spectrum of `R_x` at the minimizer, ascending.
    pub eigenvalues: Vec<f64>,
}

/// `x ↦ ksum_min(R_x, k)` on the unit sphere of `span` (or the whole tangent space).
struct Objective<'a> {
    curv: &'a CurvatureAtPoint,
    basis: Vec<DVector<f64>>,
    subspace: Option<&'a [DVector<f64>]>,
    k: usize,
}

impl Objective<'_> {
    fn direction(&self, c: &DVector<f64>) -> DVector<f64> {
        let mut x = DVector::zeros(self.curv.m);
        for (b, ci) in self.basis.iter().zip(c.iter()) {
            x += b * *ci;
        }
        x
    }

    fn value(&self, c: &DVector<f64>) -> Result<f64, GeometryError> {
        let op = directional_operator(self.curv, &self.direction(c), self.subspace)?;
        if self.k > op.dim() {
            return Err(GeometryError::BadInput(format!("k = {} exceeds {}", self.k, op.dim())));
        }
        Ok(ksum_min(&op, self.k))
    }
}

fn refine(obj: &Objective, start: DVector<f64>, mut best: f64) -> Result<(DVector<f64>, f64), GeometryError> {
    let mut c = start;
    for &step in &REFINE_STEPS {
        for _ in 0..MAX_SWEEPS {
            let mut improved = false;
            for i in 0..c.len() {
                for sign in [1.0, -1.0] {
                    let mut trial = c.clone();
                    trial[i] += sign * step;
                    let n = trial.norm();
                    if n < 1e-12 {
                        continue;
                    }
                    trial /= n;
                    let v = obj.value(&trial)?;
                    if v < best {
                        best = v;
                        c = trial;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }
    Ok((c, best))
}

/// Searches unit directions (in `subspace` if given) for the smallest `k`-sum.
/// Samples come from a seeded [`SphereSequence`]; the best one is polished by
/// coordinate descent. The result depends only on the inputs.
pub fn ric_k_min_at(
    curv: &CurvatureAtPoint,
    k: usize,
    samples: usize,
    seed: u64,
    subspace: Option<&[DVector<f64>]>,
) -> Result<RicKReport, GeometryError> {
    let m = curv.m;
    let span: Vec<DVector<f64>> = match subspace {
        Some(s) => s.to_vec(),
        None => (0..m).map(|i| DVector::from_fn(m, |j, _| if i == j { 1.0 } else { 0.0 })).collect(),
    };
    let basis = gram_orthonormal_basis(&span, &curv.gram, 1e-9);
    if basis.len() < 2 {
        return Err(GeometryError::NotTransverse);
    }
    if k == 0 || k >= basis.len() {
        return Err(GeometryError::BadInput(format!("k = {k} must lie in 1..{}", basis.len())));
    }
    if samples == 0 {
        return Err(GeometryError::BadInput("no samples".into()));
    }
    let obj = Objective { curv, basis, subspace, k };
    let dirs: Vec<DVector<f64>> = SphereSequence::new(obj.basis.len(), seed).take(samples).collect();
    let values: Vec<f64> = dirs.par_iter().map(|c| obj.value(c)).collect::<Result<_, _>>()?;
    let mut arg = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[arg] {
            arg = i;
        }
    }
    let sampled_min = values[arg];
    let (c, min_ksum) = refine(&obj, dirs[arg].clone(), sampled_min)?;
    let x = obj.direction(&c);
    let op = directional_operator(curv, &x, subspace)?;
    Ok(RicKReport {
        k,
        samples,
        seed,
        sampled_min,
        min_ksum,
        direction: x.iter().copied().collect(),
        eigenvalues: op.eigenvalues.iter().copied().collect(),
    })
}

/// Computes the curvature at `u` and then runs [`ric_k_min_at`].
pub fn ric_k_min<M: MetricField + ?Sized>(
    metric: &M,
    u: &DVector<f64>,
    h: f64,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<RicKReport, GeometryError> {
    let c = curvature(metric, u, h)?;
    ric_k_min_at(&c, k, samples, seed, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::chart::{Euclidean, PulledBack, SphereProductChart};
    use crate::geometry::curvature::DEFAULT_STEP;

    #[test]
    fn product_of_spheres() {
        // S²×S²: R_x for x = (cos a, sin a) mixes, the 1-sum minimum is 0 (mixed planes)
        let base = DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let chart = SphereProductChart::new(&base, &[2, 2]);
        let metric = PulledBack { chart: &chart, ambient: &Euclidean };
        let r1 = ric_k_min(&metric, &DVector::zeros(4), DEFAULT_STEP, 1, 256, 7).unwrap();
        assert!(r1.min_ksum.abs() < 1e-4, "{}", r1.min_ksum);
        let r3 = ric_k_min(&metric, &DVector::zeros(4), DEFAULT_STEP, 3, 256, 7).unwrap();
        // at x = (e,0): eigenvalues {0,0,1}, total 1, the minimum over x
        assert!((r3.min_ksum - 1.0).abs() < 1e-3, "{}", r3.min_ksum);
        let again = ric_k_min(&metric, &DVector::zeros(4), DEFAULT_STEP, 3, 256, 7).unwrap();
        assert_eq!(r3.direction, again.direction);
    }

    #[test]
    fn rejects_bad_k() {
        let base = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        let chart = SphereProductChart::new(&base, &[2]);
        let metric = PulledBack { chart: &chart, ambient: &Euclidean };
        assert!(ric_k_min(&metric, &DVector::zeros(2), DEFAULT_STEP, 2, 16, 0).is_err());
        assert!(ric_k_min(&metric, &DVector::zeros(2), DEFAULT_STEP, 0, 16, 0).is_err());
    }
}
