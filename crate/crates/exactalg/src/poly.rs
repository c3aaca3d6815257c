//! Sparse multivariate polynomials over exact rationals.
//!
//! A polynomial carries its variable context (an ordered, shared list of
//! names). Binary operations merge contexts by name; the merged order is
//! the global variable order, so two polynomials with the same variable
//! set always share the same exponent layout.

use crate::error::{AlgError, Result};
use crate::scalar::{self, Scalar};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub type Ctx = Arc<Vec<String>>;
pub type Monomial = Vec<u32>;

const FORM_VARS: [&str; 4] = ["x1", "y1", "x2", "y2"];

/// Global variable order: the two form-variable pairs first, then names
/// compared by alphabetic prefix and numeric suffix.
pub fn var_order(a: &str, b: &str) -> Ordering {
    let rank = |s: &str| FORM_VARS.iter().position(|v| *v == s);
    match (rank(a), rank(b)) {
        (Some(i), Some(j)) => i.cmp(&j),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => natural_key(a).cmp(&natural_key(b)),
    }
}

fn natural_key(s: &str) -> Vec<(String, u64)> {
    let mut out = Vec::new();
    let mut text = String::new();
    let mut digits = String::new();
    for ch in s.chars() {
        if ch.is_ascii_digit() {
            digits.push(ch);
        } else {
            if !digits.is_empty() {
                out.push((std::mem::take(&mut text), digits.parse().unwrap_or(u64::MAX)));
                digits.clear();
            }
            text.push(ch);
        }
    }
    let tail = if digits.is_empty() { 0 } else { digits.parse().unwrap_or(u64::MAX) + 1 };
    out.push((text, tail));
    out
}

/// Builds a canonical context: deduplicated and sorted by `var_order`.
pub fn context<I, S>(names: I) -> Ctx
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut v: Vec<String> = names.into_iter().map(|s| s.as_ref().to_string()).collect();
    v.sort_by(|a, b| var_order(a, b));
    v.dedup();
    Arc::new(v)
}

fn same_ctx(a: &Ctx, b: &Ctx) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub fn merge_ctx(a: &Ctx, b: &Ctx) -> Ctx {
    if same_ctx(a, b) {
        return a.clone();
    }
    if b.iter().all(|v| a.contains(v)) {
        return a.clone();
    }
    if a.iter().all(|v| b.contains(v)) {
        return b.clone();
    }
    context(a.iter().chain(b.iter()))
}

#[derive(Clone, Debug)]
pub struct Poly {
    vars: Ctx,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(ctx: &Ctx) -> Poly {
        Poly { vars: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Ctx, c: Scalar) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; ctx.len()], c);
        }
        Poly { vars: ctx.clone(), terms }
    }

    pub fn one(ctx: &Ctx) -> Poly {
        Poly::constant(ctx, scalar::one())
    }

    /// The variable `name`, which must belong to `ctx`.
    pub fn var_in(ctx: &Ctx, name: &str) -> Result<Poly> {
        let i = ctx
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| AlgError::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; ctx.len()];
        e[i] = 1;
        Ok(Poly::monomial(ctx, e, scalar::one()))
    }

    /// A single variable in its own one-element context.
    pub fn variable(name: &str) -> Poly {
        let ctx = context([name]);
        Poly::monomial(&ctx, vec![1], scalar::one())
    }

    pub fn monomial(ctx: &Ctx, exps: Monomial, c: Scalar) -> Poly {
        assert_eq!(exps.len(), ctx.len(), "exponent tuple length must match context");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { vars: ctx.clone(), terms }
    }

    /// Builds from raw terms, summing duplicates and dropping zeros.
    pub fn from_terms<I>(ctx: &Ctx, terms: I) -> Poly
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), ctx.len(), "exponent tuple length must match context");
            add_term(&mut map, e, c);
        }
        map.retain(|_, c| !c.is_zero());
        Poly { vars: ctx.clone(), terms: map }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.vars
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
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

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Some(c) when the polynomial is the constant c.
    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(scalar::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Re-expresses the polynomial over a context containing every
    /// variable it actually uses.
    pub fn embed(&self, ctx: &Ctx) -> Result<Poly> {
        if same_ctx(&self.vars, ctx) {
            return Ok(Poly { vars: ctx.clone(), terms: self.terms.clone() });
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match ctx.iter().position(|w| w == v) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.terms.keys().any(|e| e[i] != 0) {
                        return Err(AlgError::UnknownVariable(v.clone()));
                    }
                    map.push(None);
                }
            }
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0; ctx.len()];
            for (i, k) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    ne[j] = *k;
                }
            }
            terms.insert(ne, c.clone());
        }
        Ok(Poly { vars: ctx.clone(), terms })
    }

    fn aligned(&self, other: &Poly) -> (Poly, Poly) {
        let ctx = merge_ctx(&self.vars, &other.vars);
        (self.embed(&ctx).expect("merged context"), other.embed(&ctx).expect("merged context"))
    }

    /// Variables with a nonzero exponent somewhere.
    pub fn used_vars(&self) -> Vec<String> {
        let mut used = vec![false; self.vars.len()];
        for e in self.terms.keys() {
            for (i, k) in e.iter().enumerate() {
                used[i] |= *k != 0;
            }
        }
        self.vars.iter().zip(used).filter(|(_, u)| *u).map(|(v, _)| v.clone()).collect()
    }

    /// Drops unused variables from the context.
    pub fn trimmed(&self) -> Poly {
        let ctx = context(self.used_vars());
        self.embed(&ctx).expect("used variables")
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.var_index(name) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        Poly { vars: self.vars.clone(), terms }
    }

    pub fn add_poly(&self, other: &Poly) -> Poly {
        if !same_ctx(&self.vars, &other.vars) {
            let (a, b) = self.aligned(other);
            return a.add_poly(&b);
        }
        let (big, small) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut terms = big.terms.clone();
        for (e, c) in &small.terms {
            add_term(&mut terms, e.clone(), c.clone());
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { vars: big.vars.clone(), terms }
    }

    pub fn add_assign_scaled(&mut self, other: &Poly, c: &Scalar) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        if !same_ctx(&self.vars, &other.vars) {
            let ctx = merge_ctx(&self.vars, &other.vars);
            *self = self.embed(&ctx).expect("merged context");
            let o = other.embed(&ctx).expect("merged context");
            self.add_assign_scaled(&o, c);
            return;
        }
        for (e, v) in &other.terms {
            add_term(&mut self.terms, e.clone(), v * c);
        }
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn sub_poly(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-scalar::one());
        out
    }

    pub fn neg_poly(&self) -> Poly {
        self.scale(&-scalar::one())
    }

    pub fn mul_poly(&self, other: &Poly) -> Poly {
        if !same_ctx(&self.vars, &other.vars) {
            let (a, b) = self.aligned(other);
            return a.mul_poly(&b);
        }
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.vars);
        }
        let mut scratch: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.len() * other.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let prod = c1 * c2;
                match scratch.get_mut(&e) {
                    Some(v) => *v += prod,
                    None => {
                        scratch.insert(e, prod);
                    }
                }
            }
        }
        for (e, c) in scratch {
            if !c.is_zero() {
                terms.insert(e, c);
            }
        }
        Poly { vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(&self.vars);
        for _ in 0..n {
            acc = acc.mul_poly(self);
        }
        acc
    }

    /// Iterated formal partial derivative. A variable outside the context
    /// is treated as absent, so the derivative of order > 0 is zero.
    pub fn diff(&self, name: &str, order: u32) -> Poly {
        if order == 0 {
            return self.clone();
        }
        let Some(i) = self.var_index(name) else {
            return Poly::zero(&self.vars);
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] < order {
                continue;
            }
            let mut falling = scalar::one();
            for j in 0..order {
                falling *= scalar::int((e[i] - j) as i64);
            }
            let mut ne = e.clone();
            ne[i] -= order;
            terms.insert(ne, c * falling);
        }
        Poly { vars: self.vars.clone(), terms }
    }

    /// Mixed partial derivative with orders listed per variable name.
    pub fn diff_multi(&self, orders: &[(&str, u32)]) -> Poly {
        let mut out = self.clone();
        for (v, k) in orders {
            if *k > 0 {
                out = out.diff(v, *k);
                if out.is_zero() {
                    break;
                }
            }
        }
        out
    }

    /// Simultaneous substitution. Every substituted name must occur in the
    /// context of `self`.
    pub fn subs(&self, assignment: &BTreeMap<String, Poly>) -> Result<Poly> {
        for name in assignment.keys() {
            if self.var_index(name).is_none() {
                return Err(AlgError::UnknownVariable(name.clone()));
            }
        }
        let mut ctx_names: Vec<String> =
            self.vars.iter().filter(|v| !assignment.contains_key(*v)).cloned().collect();
        for p in assignment.values() {
            ctx_names.extend(p.vars.iter().cloned());
        }
        let ctx = context(ctx_names);
        let images: Vec<Option<Poly>> = self
            .vars
            .iter()
            .map(|v| assignment.get(v).map(|p| p.embed(&ctx).expect("substitution context")))
            .collect();
        let keep: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| if assignment.contains_key(v) { None } else { ctx.iter().position(|w| w == v) })
            .collect();
        let mut powers: Vec<BTreeMap<u32, Poly>> = vec![BTreeMap::new(); self.vars.len()];
        let mut out = Poly::zero(&ctx);
        for (e, c) in &self.terms {
            let mut base = vec![0; ctx.len()];
            let mut factor = Poly::constant(&ctx, c.clone());
            for (i, k) in e.iter().enumerate() {
                if *k == 0 {
                    continue;
                }
                match (&images[i], keep[i]) {
                    (Some(img), _) => {
                        let pw = powers[i].entry(*k).or_insert_with(|| img.pow(*k)).clone();
                        factor = factor.mul_poly(&pw);
                    }
                    (None, Some(j)) => base[j] += k,
                    (None, None) => unreachable!(),
                }
            }
            let mono = Poly::monomial(&ctx, base, scalar::one());
            out = out.add_poly(&factor.mul_poly(&mono));
        }
        Ok(out)
    }

    /// Substitutes rational values; variables not assigned stay symbolic.
    pub fn subs_values(&self, values: &BTreeMap<String, Scalar>) -> Poly {
        let idx: Vec<Option<&Scalar>> = self.vars.iter().map(|v| values.get(v)).collect();
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut coef = c.clone();
            let mut ne = e.clone();
            for (i, k) in e.iter().enumerate() {
                if let (Some(v), true) = (idx[i], *k > 0) {
                    coef *= pow_scalar(v, *k);
                    ne[i] = 0;
                }
            }
            add_term(&mut terms, ne, coef);
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { vars: self.vars.clone(), terms }
    }

    /// Full evaluation; fails if a used variable has no value.
    pub fn eval(&self, values: &BTreeMap<String, Scalar>) -> Result<Scalar> {
        let p = self.subs_values(values);
        p.constant_value().ok_or_else(|| {
            let missing = p.used_vars().into_iter().next().unwrap_or_default();
            AlgError::UnknownVariable(missing)
        })
    }

    /// Splits into coefficients of monomials in `names`; the coefficient
    /// polynomials keep the full context with those exponents zeroed.
    pub fn split_by(&self, names: &[&str]) -> BTreeMap<Monomial, Poly> {
        let idx: Vec<Option<usize>> = names.iter().map(|n| self.var_index(n)).collect();
        let mut out: BTreeMap<Monomial, BTreeMap<Monomial, Scalar>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let key: Monomial = idx.iter().map(|i| i.map_or(0, |i| e[i])).collect();
            let mut rest = e.clone();
            for i in idx.iter().flatten() {
                rest[*i] = 0;
            }
            out.entry(key).or_default().insert(rest, c.clone());
        }
        out.into_iter().map(|(k, terms)| (k, Poly { vars: self.vars.clone(), terms })).collect()
    }

    /// Coefficient of one monomial in the listed variables.
    pub fn coeff_of(&self, names: &[&str], exps: &[u32]) -> Poly {
        self.split_by(names).remove(exps).unwrap_or_else(|| Poly::zero(&self.vars))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Exact division; errors if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        if divisor.is_zero() {
            return Err(AlgError::NotDivisible);
        }
        if !same_ctx(&self.vars, &divisor.vars) {
            let (a, b) = self.aligned(divisor);
            return a.div_exact(&b);
        }
        if let Some(c) = divisor.constant_value() {
            return Ok(self.scale(&(scalar::one() / c)));
        }
        let (lead_e, lead_c) = divisor.leading_term().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        while let Some((e, c)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&lead_e).any(|(a, b)| a < b) {
                return Err(AlgError::NotDivisible);
            }
            let qe: Monomial = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            let qc = &c / &lead_c;
            let q = Poly::monomial(&self.vars, qe.clone(), qc.clone());
            rem = rem.sub_poly(&q.mul_poly(divisor));
            quot.insert(qe, qc);
        }
        Ok(Poly { vars: self.vars.clone(), terms: quot })
    }

    /// Terms as (monomial, coefficient) in lexicographic exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn set_of_vars(&self) -> BTreeSet<String> {
        self.vars.iter().cloned().collect()
    }
}

fn add_term(map: &mut BTreeMap<Monomial, Scalar>, e: Monomial, c: Scalar) {
    match map.get_mut(&e) {
        Some(v) => *v += c,
        None => {
            map.insert(e, c);
        }
    }
}

pub fn pow_scalar(v: &Scalar, k: u32) -> Scalar {
    let mut acc = scalar::one();
    for _ in 0..k {
        acc *= v;
    }
    acc
}

impl PartialEq for Poly {
    fn eq(&self, other: &Poly) -> bool {
        if same_ctx(&self.vars, &other.vars) {
            return self.terms == other.terms;
        }
        let (a, b) = self.aligned(other);
        a.terms == b.terms
    }
}

impl Eq for Poly {}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.add_poly(rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.sub_poly(rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_poly(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_poly()
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        self.add_poly(&rhs)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self.sub_poly(&rhs)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        self.mul_poly(&rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_poly()
    }
}

impl fmt::Display for Poly {
    /// Highest monomial first, e.g. `x1^2 - 3/2*x1*y1 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(self.vars.iter())
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            let negative = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{}", scalar::format_short(&mag))?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{}*{}", scalar::format_short(&mag), mono.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn xy() -> (Poly, Poly) {
        let ctx = context(["x", "y"]);
        (Poly::var_in(&ctx, "x").unwrap(), Poly::var_in(&ctx, "y").unwrap())
    }

    #[test]
    fn difference_of_squares() {
        let (x, y) = xy();
        let lhs = (&x + &y) * (&x - &y);
        let rhs = &(&x * &x) - &(&y * &y);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn annihilator_and_rational_product() {
        let (x, _) = xy();
        assert!((&x * &Poly::zero(x.ctx())).is_zero());
        let p = x.scale(&ratio(1, 2)).mul_poly(&x.scale(&ratio(2, 3)));
        assert_eq!(p, x.pow(2).scale(&ratio(1, 3)));
    }

    #[test]
    fn derivatives() {
        let (x, y) = xy();
        assert_eq!(x.pow(3).diff("x", 2), x.scale(&int(6)));
        assert_eq!((&x.pow(2) * &y).diff("y", 1), x.pow(2));
        assert!(x.pow(2).diff("x", 3).is_zero());
    }

    #[test]
    fn substitution_and_homogeneity() {
        let (x, y) = xy();
        let p = &x.pow(2) + &y.pow(2);
        let vals: BTreeMap<String, Scalar> = [("x".into(), int(1)), ("y".into(), int(2))].into();
        assert_eq!(p.eval(&vals).unwrap(), int(5));
        let l = Poly::variable("l");
        let cube = (&(&x * &x) * &y) + x.pow(3);
        let sub: BTreeMap<String, Poly> = [("x".into(), &l * &x), ("y".into(), &l * &y)].into();
        assert_eq!(cube.subs(&sub).unwrap(), &l.pow(3) * &cube);
    }

    #[test]
    fn contexts_merge_by_name() {
        let a = Poly::variable("b");
        let c = Poly::variable("a");
        let s = &a + &c;
        assert_eq!(s.vars(), &["a".to_string(), "b".to_string()]);
        assert_eq!(&s - &c, a);
    }

    #[test]
    fn exact_division() {
        let (x, y) = xy();
        let p = &(&x + &y) * &(&x - &y.scale(&int(2)));
        assert_eq!(p.div_exact(&(&x + &y)).unwrap(), &x - &y.scale(&int(2)));
        assert!(x.div_exact(&y).is_err());
    }

    #[test]
    fn display_is_readable() {
        let (x, y) = xy();
        let p = &(&x.pow(2) - &(&x * &y).scale(&ratio(3, 2))) + &Poly::one(x.ctx());
        assert_eq!(p.to_string(), "x^2 - 3/2*x*y + 1");
    }

    #[test]
    fn natural_order() {
        let c = context(["b10", "b2", "x2", "x1", "a20_0"]);
        assert_eq!(c.as_slice(), ["x1", "x2", "a20_0", "b2", "b10"]);
    }
}
