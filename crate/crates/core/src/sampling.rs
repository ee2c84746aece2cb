//! Seeded random and low-discrepancy sampling on spheres.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

/// Box–Muller standard normal.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| standard_normal(rng));
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

/// Independent child stream `index` of a master seed.
pub fn child_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

const PRIMES: [u32; 24] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89];

fn radical_inverse(mut n: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while n > 0 {
        out += (n % b) as f64 * f;
        n /= b;
        f *= inv;
    }
    out
}

/// Randomly shifted Halton points mapped to the unit sphere `S^{dim-1}` through
/// the inverse normal CDF. Identical `(dim, seed)` give identical sequences.
#[derive(Clone, Debug)]
pub struct SphereSequence {
    dim: usize,
    shift: Vec<f64>,
    index: u64,
    normal: Normal,
}

impl SphereSequence {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim >= 1 && dim <= PRIMES.len(), "sphere dimension {dim} unsupported");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = (0..dim).map(|_| rng.random::<f64>()).collect();
        Self { dim, shift, index: 1, normal: Normal::standard() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl Iterator for SphereSequence {
    type Item = DVector<f64>;

    fn next(&mut self) -> Option<DVector<f64>> {
        loop {
            let n = self.index;
            self.index += 1;
            let v = DVector::from_fn(self.dim, |a, _| {
                let u = (radical_inverse(n, PRIMES[a]) + self.shift[a]).fract();
                let u = u.clamp(1e-12, 1.0 - 1e-12);
                self.normal.inverse_cdf(u)
            });
            let norm = v.norm();
            if norm > 1e-8 {
                return Some(v / norm);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
    }

    #[test]
    fn sphere_sequence_is_reproducible_and_unit() {
        let a: Vec<_> = SphereSequence::new(5, 11).take(50).collect();
        let b: Vec<_> = SphereSequence::new(5, 11).take(50).collect();
        assert_eq!(a, b);
        for v in &a {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        let c: Vec<_> = SphereSequence::new(5, 12).take(50).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn sphere_sequence_is_roughly_balanced() {
        let mean = SphereSequence::new(3, 0).take(4000).fold(DVector::zeros(3), |acc, v| acc + v) / 4000.0;
        assert!(mean.norm() < 0.03, "mean {mean}");
    }

    #[test]
    fn child_streams_differ() {
        let a: u64 = child_rng(5, 0).random();
        let b: u64 = child_rng(5, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, child_rng(5, 0).random::<u64>());
    }
}
