//! Exact randomized equivariance checks for pairings.

use crate::action::{act, GENERATORS};
use crate::biform::{dim, transvectant2, BiForm};
use crate::error::Result;
use exactalg::random::random_scalars;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivarianceReport {
    pub p1: u32,
    pub p2: u32,
    pub left: (u32, u32),
    pub right: (u32, u32),
    pub trials: usize,
    pub checks: usize,
    pub failures: usize,
}

impl EquivarianceReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }
}

/// Random form with small signed rational coordinates.
pub fn random_form(n: u32, m: u32, seed: u64) -> BiForm {
    BiForm::from_scalars(n, m, &random_scalars(dim(n, m), seed, 9)).expect("matching dimension")
}

pub fn equivariance_check(
    p1: u32,
    p2: u32,
    left: (u32, u32),
    right: (u32, u32),
    trials: usize,
    seed: u64,
) -> Result<EquivarianceReport> {
    equivariance_check_with(|u, v| transvectant2(u, v, p1, p2), p1, p2, left, right, trials, seed)
}

/// Checks `X <u,v> = <X u, v> + <u, X v>` for all six generators, using an
/// arbitrary pairing so that mutated formulas can be tested too.
pub fn equivariance_check_with<F>(
    pairing: F,
    p1: u32,
    p2: u32,
    left: (u32, u32),
    right: (u32, u32),
    trials: usize,
    seed: u64,
) -> Result<EquivarianceReport>
where
    F: Fn(&BiForm, &BiForm) -> Result<BiForm>,
{
    let mut checks = 0;
    let mut failures = 0;
    for t in 0..trials as u64 {
        let u = random_form(left.0, left.1, seed.wrapping_mul(1_000_003).wrapping_add(2 * t));
        let v = random_form(right.0, right.1, seed.wrapping_mul(1_000_003).wrapping_add(2 * t + 1));
        let uv = pairing(&u, &v)?;
        for (g, s) in GENERATORS {
            let lhs = act(g, s, &uv);
            let rhs = pairing(&act(g, s, &u), &v)?.value().add_poly(pairing(&u, &act(g, s, &v))?.value());
            checks += 1;
            if lhs.value() != &rhs {
                failures += 1;
            }
        }
    }
    Ok(EquivarianceReport { p1, p2, left, right, trials, checks, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transvectants_are_equivariant() {
        assert!(equivariance_check(1, 2, (1, 2), (2, 3), 3, 1).unwrap().passed());
        assert!(equivariance_check(0, 0, (1, 1), (2, 0), 2, 2).unwrap().passed());
    }

    #[test]
    fn wrong_sign_is_caught() {
        // drop the alternating sign in the first slot
        let mutated = |u: &BiForm, v: &BiForm| -> Result<BiForm> {
            let mut acc = exactalg::Poly::zero(crate::biform::form_ctx());
            for k in 0..=1u32 {
                let du = u.value().diff_multi(&[("x1", k), ("y1", 1 - k)]);
                let dv = v.value().diff_multi(&[("x1", 1 - k), ("y1", k)]);
                acc = acc.add_poly(&du.mul_poly(&dv));
            }
            let (a, b) = (u.bidegree(), v.bidegree());
            BiForm::new(a.0 + b.0 - 2, a.1 + b.1, acc)
        };
        let r = equivariance_check_with(mutated, 1, 0, (2, 0), (2, 0), 2, 5).unwrap();
        assert!(!r.passed());
    }
}
