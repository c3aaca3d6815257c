//! Exterior forms on the 13-element coframe with polynomial coefficients.
//!
//! An exterior monomial is a bitmask over the generators; bit order is the
//! canonical order, so `e_i ∧ e_j` with `i < j` is stored as is and any
//! other product is sorted with a parity sign.

use crate::error::{CalcError, Result};
use binforms::biform::{basis_index, form_ctx, pair_polys, weight_basis, FORM_VARS};
use exactalg::scalar::one;
use exactalg::{Poly, Scalar};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

pub const NGEN: usize = 13;
pub type Mask = u32;

pub const THETA: [usize; 6] = [0, 1, 2, 3, 4, 5];
pub const OMEGA00: usize = 6;
/// Second-slot connection components, weight basis of V(0,2).
pub const OMEGA02: [usize; 3] = [7, 8, 9];
/// First-slot connection components, weight basis of V(2,0).
pub const OMEGA20: [usize; 3] = [10, 11, 12];

const LABELS: [&str; NGEN] = [
    "θ_{1,2}",
    "θ_{1,0}",
    "θ_{1,-2}",
    "θ_{-1,2}",
    "θ_{-1,0}",
    "θ_{-1,-2}",
    "ω_{0,0}",
    "ω02_{0,2}",
    "ω02_{0,0}",
    "ω02_{0,-2}",
    "ω20_{2,0}",
    "ω20_{0,0}",
    "ω20_{-2,0}",
];

pub fn label(g: usize) -> &'static str {
    LABELS[g]
}

pub fn bit(g: usize) -> Mask {
    1 << g
}

/// Sign of `e_a ∧ e_b` relative to the sorted monomial `a | b`, or `None`
/// when the two share a generator.
pub fn wedge_sign(a: Mask, b: Mask) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormExpr {
    terms: BTreeMap<Mask, Poly>,
}

impl FormExpr {
    pub fn zero() -> FormExpr {
        FormExpr::default()
    }

    pub fn function(p: Poly) -> FormExpr {
        FormExpr::monomial(0, p)
    }

    pub fn generator(g: usize) -> FormExpr {
        FormExpr::monomial(bit(g), Poly::one(form_ctx()))
    }

    pub fn monomial(mask: Mask, coeff: Poly) -> FormExpr {
        let mut f = FormExpr::zero();
        f.add_term(mask, &coeff, &one());
        f
    }

    pub fn terms(&self) -> &BTreeMap<Mask, Poly> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mask: Mask) -> Option<&Poly> {
        self.terms.get(&mask)
    }

    /// Degree if every term has the same exterior degree.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.count_ones());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn add_term(&mut self, mask: Mask, coeff: &Poly, c: &Scalar) {
        if coeff.is_zero() || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(p) => {
                p.add_assign_scaled(coeff, c);
                if p.is_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, coeff.scale(c));
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &FormExpr, c: &Scalar) {
        for (m, p) in &other.terms {
            self.add_term(*m, p, c);
        }
    }

    pub fn add(&self, other: &FormExpr) -> FormExpr {
        let mut out = self.clone();
        out.add_assign_scaled(other, &one());
        out
    }

    pub fn sub(&self, other: &FormExpr) -> FormExpr {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-one());
        out
    }

    pub fn neg(&self) -> FormExpr {
        self.scale(&-one())
    }

    pub fn scale(&self, c: &Scalar) -> FormExpr {
        let mut out = FormExpr::zero();
        out.add_assign_scaled(self, c);
        out
    }

    /// Multiplication by a 0-form.
    pub fn mul_fn(&self, f: &Poly) -> FormExpr {
        self.map_coeffs(|p| p.mul_poly(f))
    }

    pub fn map_coeffs<F: Fn(&Poly) -> Poly>(&self, f: F) -> FormExpr {
        let mut out = FormExpr::zero();
        for (m, p) in &self.terms {
            out.add_term(*m, &f(p), &one());
        }
        out
    }

    pub fn wedge(&self, other: &FormExpr) -> FormExpr {
        let mut out = FormExpr::zero();
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                if let Some(neg) = wedge_sign(*a, *b) {
                    let c = if neg { -one() } else { one() };
                    out.add_term(a | b, &p.mul_poly(q), &c);
                }
            }
        }
        out
    }

    /// Drops every term containing generator `g`.
    pub fn drop_generator(&self, g: usize) -> FormExpr {
        FormExpr { terms: self.terms.iter().filter(|(m, _)| *m & bit(g) == 0).map(|(m, p)| (*m, p.clone())).collect() }
    }

    pub fn subs(&self, assignment: &BTreeMap<String, Poly>) -> Result<FormExpr> {
        let mut out = FormExpr::zero();
        for (m, p) in &self.terms {
            let known: BTreeMap<String, Poly> =
                assignment.iter().filter(|(k, _)| p.var_index(k).is_some()).map(|(k, v)| (k.clone(), v.clone())).collect();
            out.add_term(*m, &p.subs(&known)?, &one());
        }
        Ok(out)
    }

    pub fn subs_values(&self, values: &BTreeMap<String, Scalar>) -> FormExpr {
        self.map_coeffs(|p| p.subs_values(values))
    }

    /// Largest coefficient size, a crude measure of expression swell.
    pub fn max_terms(&self) -> usize {
        self.terms.values().map(Poly::len).max().unwrap_or(0)
    }
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, p)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({p})")?;
            for g in 0..NGEN {
                if m & bit(g) != 0 {
                    write!(f, "*{}", label(g))?;
                }
            }
        }
        Ok(())
    }
}

/// `Σ e_{gens[i]} ⊗ basis[i]`, a form-valued coframe block.
pub fn valued(gens: &[usize], basis: &[Poly]) -> FormExpr {
    let mut out = FormExpr::zero();
    for (g, b) in gens.iter().zip(basis) {
        out.add_term(bit(*g), b, &one());
    }
    out
}

/// `Σ c_i ⊗ basis[i]` for scalar-valued coefficient functions.
pub fn expand_in_basis(coords: &[Poly], basis: &[Poly]) -> Poly {
    let mut acc = Poly::zero(form_ctx());
    for (c, b) in coords.iter().zip(basis) {
        acc.add_assign_scaled(&c.mul_poly(b), &one());
    }
    acc
}

/// Pairing of form-valued expressions: expand both sides over the
/// coframe and pair the values, `Σ (dI ∧ dJ) ⊗ <α_I, β_J>_{p1,p2}`.
pub fn fpair(a: &FormExpr, b: &FormExpr, p1: u32, p2: u32) -> FormExpr {
    let mut out = FormExpr::zero();
    for (ma, pa) in &a.terms {
        for (mb, pb) in &b.terms {
            if let Some(neg) = wedge_sign(*ma, *mb) {
                let v = pair_polys(pa, pb, p1, p2);
                let c = if neg { -one() } else { one() };
                out.add_term(ma | mb, &v, &c);
            }
        }
    }
    out
}

/// Bidegree split of a form-valued expression in the form variables.
pub fn split_bidegree(f: &FormExpr) -> BTreeMap<(u32, u32), FormExpr> {
    let mut out: BTreeMap<(u32, u32), FormExpr> = BTreeMap::new();
    for (m, p) in &f.terms {
        let mut parts: BTreeMap<(u32, u32), Poly> = BTreeMap::new();
        for (e, c) in p.iter() {
            let idx: Vec<u32> = FORM_VARS.iter().map(|v| p.var_index(v).map_or(0, |i| e[i])).collect();
            let key = (idx[0] + idx[1], idx[2] + idx[3]);
            let term = Poly::monomial(p.ctx(), e.clone(), c.clone());
            parts.entry(key).and_modify(|q| q.add_assign_scaled(&term, &one())).or_insert(term);
        }
        for (k, q) in parts {
            out.entry(k).or_default().add_term(*m, &q, &one());
        }
    }
    out
}

/// Scalar-valued components of a V(n,m)-valued expression in the weight
/// basis. Terms of any other bidegree are an error.
pub fn components(f: &FormExpr, n: u32, m: u32) -> Result<Vec<FormExpr>> {
    let d = weight_basis(n, m).len();
    let mut out = vec![FormExpr::zero(); d];
    for (mask, p) in &f.terms {
        for (e, c) in p.split_by(&FORM_VARS) {
            if (e[0] + e[1], e[2] + e[3]) != (n, m) {
                return Err(CalcError::StrayBidegree((e[0] + e[1], e[2] + e[3])));
            }
            out[basis_index(m, &e)].add_term(*mask, &c, &one());
        }
    }
    Ok(out)
}

/// Components of a V(n,m)-valued function.
pub fn function_components(p: &Poly, n: u32, m: u32) -> Result<Vec<Poly>> {
    let comps = components(&FormExpr::function(p.clone()), n, m)?;
    Ok(comps.into_iter().map(|c| c.coefficient(0).cloned().unwrap_or_else(|| Poly::zero(form_ctx()))).collect())
}

/// Weight-basis monomials of the coframe blocks.
pub fn theta_basis() -> Vec<Poly> {
    weight_basis(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactalg::scalar::int;

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_sign(bit(0), bit(1)), Some(false));
        assert_eq!(wedge_sign(bit(1), bit(0)), Some(true));
        assert_eq!(wedge_sign(bit(2), bit(2)), None);
        assert_eq!(wedge_sign(bit(0) | bit(2), bit(1)), Some(true));
        assert_eq!(wedge_sign(bit(1) | bit(2), bit(0)), Some(false));
    }

    #[test]
    fn one_forms_anticommute() {
        let a = FormExpr::generator(3);
        let b = FormExpr::generator(7);
        assert_eq!(a.wedge(&b), b.wedge(&a).neg());
        assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn theta_self_pairing_is_generically_nonzero() {
        let th = valued(&THETA, &theta_basis());
        for (p1, p2) in [(1, 2), (0, 1), (1, 0)] {
            assert!(!fpair(&th, &th, p1, p2).is_zero(), "{p1},{p2}");
        }
        // even total order on identical 1-forms: the symmetric pairing
        // meets the antisymmetric wedge and cancels
        assert!(fpair(&th, &th, 0, 0).is_zero());
    }

    #[test]
    fn components_round_trip() {
        let th = valued(&THETA, &theta_basis());
        let comps = components(&th, 1, 2).unwrap();
        for (i, c) in comps.iter().enumerate() {
            assert_eq!(*c, FormExpr::generator(i));
        }
        assert!(components(&th, 2, 0).is_err());
        let split = split_bidegree(&th.add(&valued(&OMEGA20, &weight_basis(2, 0)).scale(&int(2))));
        assert_eq!(split.keys().copied().collect::<Vec<_>>(), vec![(1, 2), (2, 0)]);
    }
}
