//! Sampled isometry and Killing checks.

use nalgebra::{DMatrix, DVector};

use crate::geometry::AmbientMetric;

const FD_STEP: f64 = 1e-4;

pub type AmbientMap<'a> = &'a (dyn Fn(&DVector<f64>) -> DVector<f64> + Sync);

/// `(p, x, y)` with `x, y` tangent at `p`.
pub type TangentSample = (DVector<f64>, DVector<f64>, DVector<f64>);

fn push_forward(map: AmbientMap, p: &DVector<f64>, x: &DVector<f64>) -> DVector<f64> {
    (map(&(p + x * FD_STEP)) - map(&(p - x * FD_STEP))) / (2.0 * FD_STEP)
}

fn pair(metric: &impl AmbientMetric, p: &DVector<f64>, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    metric.gram_of(p, &DMatrix::from_columns(&[x.clone(), y.clone()]))[(0, 1)]
}

/// `max |g(dA x, dA y) − g(x, y)|` over maps and samples, with `dA` by central differences.
pub fn invariance_check<M: AmbientMetric>(metric: &M, maps: &[AmbientMap], samples: &[TangentSample]) -> f64 {
    let mut worst: f64 = 0.0;
    for map in maps {
        for (p, x, y) in samples {
            let q = map(p);
            let (ax, ay) = (push_forward(*map, p, x), push_forward(*map, p, y));
            worst = worst.max((pair(metric, &q, &ax, &ay) - pair(metric, p, x, y)).abs());
        }
    }
    worst
}

/// Lie derivative of the metric along a flow `(s, p) ↦ A_s p`, by central differences in `s`.
pub fn killing_defect<M: AmbientMetric>(
    metric: &M,
    flow: &(dyn Fn(f64, &DVector<f64>) -> DVector<f64> + Sync),
    samples: &[TangentSample],
) -> f64 {
    let mut worst: f64 = 0.0;
    for (p, x, y) in samples {
        let at = |s: f64| {
            let map = |q: &DVector<f64>| flow(s, q);
            let (ax, ay) = (push_forward(&map, p, x), push_forward(&map, p, y));
            pair(metric, &flow(s, p), &ax, &ay)
        };
        worst = worst.max(((at(FD_STEP) - at(-FD_STEP)) / (2.0 * FD_STEP)).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Euclidean;

    #[test]
    fn identity_has_zero_defect() {
        let id = |p: &DVector<f64>| p.clone();
        let s = vec![(
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0]),
            DVector::from_vec(vec![0.0, 2.0]),
        )];
        assert_eq!(invariance_check(&Euclidean, &[&id], &s), 0.0);
        let stretch = |p: &DVector<f64>| p * 2.0;
        assert!(invariance_check(&Euclidean, &[&stretch], &s) > 1.0);
    }
}
