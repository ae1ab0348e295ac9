//! Seeded state samplers.
//!
//! Random states are uniform compositions of an integer `n` into `d`
//! positive parts, so their coefficients are exact rationals with
//! denominator `n` and the distribution approaches the uniform measure on
//! the simplex. Searches use a randomly shifted Halton sequence instead,
//! which covers the simplex more evenly for the same budget.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{NumericConfig, Scalar};
use crate::state::SchmidtVector;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Composition of `n` into `d` positive parts, sorted descending.
pub fn random_composition<R: Rng + ?Sized>(rng: &mut R, d: usize, n: u32) -> Vec<u32> {
    assert!(d >= 1 && n as usize >= d, "need n >= d >= 1");
    let mut cuts: Vec<u32> = index::sample(rng, n as usize - 1, d - 1)
        .into_iter()
        .map(|c| c as u32 + 1)
        .collect();
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(d);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(n)) {
        parts.push(c - prev);
        prev = c;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Random state with coefficients `k / n`.
pub fn random_state<S: Scalar, R: Rng + ?Sized>(rng: &mut R, d: usize, n: u32) -> SchmidtVector<S> {
    grid_state(&random_composition(rng, d, n), n)
}

/// Random state whose coefficients are pairwise distinct.
pub fn random_distinct_state<S: Scalar, R: Rng + ?Sized>(rng: &mut R, d: usize, n: u32) -> SchmidtVector<S> {
    loop {
        let parts = random_composition(rng, d, n);
        if parts.windows(2).all(|w| w[0] > w[1]) {
            return grid_state(&parts, n);
        }
    }
}

pub(crate) fn grid_state<S: Scalar>(parts: &[u32], n: u32) -> SchmidtVector<S> {
    SchmidtVector::new(
        parts.iter().map(|&k| S::from_ratio(k as i64, n as i64)).collect(),
        &NumericConfig::exact(),
    )
    .expect("compositions are positive")
}

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Halton sequence with a Cranley-Patterson rotation drawn from `seed`.
#[derive(Clone, Debug)]
pub struct ShiftedHalton {
    shift: Vec<f64>,
}

impl ShiftedHalton {
    pub fn new(dims: usize, seed: u64) -> Self {
        assert!(dims <= PRIMES.len(), "at most {} dimensions", PRIMES.len());
        let mut r = rng(seed);
        ShiftedHalton {
            shift: (0..dims).map(|_| r.gen::<f64>()).collect(),
        }
    }

    pub fn dims(&self) -> usize {
        self.shift.len()
    }

    /// Point `index` of the sequence in `[0, 1)^dims`.
    pub fn point(&self, index: u64) -> Vec<f64> {
        self.shift
            .iter()
            .zip(PRIMES)
            .map(|(s, p)| (radical_inverse(index + 1, p) + s).fract())
            .collect()
    }
}

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    r
}

/// Maps a point of `[0,1)^(d-1)` to a composition of `n` into `d` positive
/// parts (sorted spacings), or `None` when two cuts collide.
pub fn composition_from_unit(u: &[f64], n: u32) -> Option<Vec<u32>> {
    let d = u.len() + 1;
    if (n as usize) < d {
        return None;
    }
    let mut cuts: Vec<u32> = u
        .iter()
        .map(|&x| 1 + ((x * (n - 1) as f64) as u32).min(n - 2))
        .collect();
    cuts.sort_unstable();
    if cuts.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let mut parts = Vec::with_capacity(d);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(n)) {
        parts.push(c - prev);
        prev = c;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Some(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn compositions_sum_to_n() {
        let mut r = rng(7);
        for d in 1..7 {
            let parts = random_composition(&mut r, d, 10_000);
            assert_eq!(parts.len(), d);
            assert_eq!(parts.iter().sum::<u32>(), 10_000);
            assert!(parts.iter().all(|&p| p > 0));
            assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a: SchmidtVector<Rational> = random_state(&mut rng(3), 4, 100);
        let b: SchmidtVector<Rational> = random_state(&mut rng(3), 4, 100);
        assert_eq!(a, b);
        let h = ShiftedHalton::new(4, 11);
        assert_eq!(h.point(17), ShiftedHalton::new(4, 11).point(17));
        assert!(h.point(5).iter().all(|&x| (0.0..1.0).contains(&x)));
    }

    #[test]
    fn distinct_states_are_strictly_decreasing() {
        let mut r = rng(5);
        for _ in 0..50 {
            let s: SchmidtVector<Rational> = random_distinct_state(&mut r, 3, 50);
            assert!(s.is_strictly_decreasing(&NumericConfig::exact()));
        }
    }

    #[test]
    fn unit_points_map_to_compositions() {
        assert_eq!(composition_from_unit(&[0.5], 100), Some(vec![50, 50]));
        assert_eq!(composition_from_unit(&[0.25], 100), Some(vec![75, 25]));
        assert_eq!(composition_from_unit(&[0.3, 0.3], 100), None);
        let parts = composition_from_unit(&[0.999, 0.0], 100).unwrap();
        assert_eq!(parts.iter().sum::<u32>(), 100);
    }

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
    }
}
