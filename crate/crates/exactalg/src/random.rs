//! Seeded pseudo-random rational points.

use crate::scalar::{ratio, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub const DEFAULT_BOUND: i64 = 97;

/// Deterministic point with numerators and denominators in `[1, bound]`.
pub fn random_rational_point<S: AsRef<str>>(vars: &[S], seed: u64) -> BTreeMap<String, Scalar> {
    random_rational_point_bounded(vars, seed, DEFAULT_BOUND)
}

pub fn random_rational_point_bounded<S: AsRef<str>>(vars: &[S], seed: u64, bound: i64) -> BTreeMap<String, Scalar> {
    let bound = bound.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vars.iter()
        .map(|v| {
            let n = rng.gen_range(1..=bound);
            let d = rng.gen_range(1..=bound);
            (v.as_ref().to_string(), ratio(n, d))
        })
        .collect()
}

/// Deterministic vector of small signed rationals, for test inputs.
pub fn random_scalars(len: usize, seed: u64, bound: i64) -> Vec<Scalar> {
    let bound = bound.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| ratio(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        assert_eq!(random_rational_point(&["t"], 11), random_rational_point(&["t"], 11));
    }

    #[test]
    fn seeds_differ() {
        let vars = ["a", "b", "c"];
        assert_ne!(random_rational_point(&vars, 1), random_rational_point(&vars, 2));
    }

    #[test]
    fn within_bounds() {
        for v in random_rational_point_bounded(&["a", "b", "c", "d"], 5, 7).values() {
            assert!(v.numer() <= &7.into() && v.denom() <= &7.into() && v > &ratio(0, 1));
        }
    }
}
