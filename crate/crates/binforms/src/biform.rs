//! Bihomogeneous forms and the transvectant pairings.

use crate::error::{FormError, Result};
use exactalg::scalar::{binomial, factorial, int, one};
use exactalg::{context, Ctx, Monomial, Poly, Scalar};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

pub const X1: &str = "x1";
pub const Y1: &str = "y1";
pub const X2: &str = "x2";
pub const Y2: &str = "y2";
pub const FORM_VARS: [&str; 4] = [X1, Y1, X2, Y2];

/// Shared context holding only the four form variables.
pub fn form_ctx() -> &'static Ctx {
    static CTX: OnceLock<Ctx> = OnceLock::new();
    CTX.get_or_init(|| context(FORM_VARS))
}

pub fn dim(n: u32, m: u32) -> usize {
    ((n + 1) * (m + 1)) as usize
}

/// Exponents of the weight-basis element `x1^(n-i) y1^i x2^(m-j) y2^j`.
pub fn basis_exps(n: u32, m: u32, i: u32, j: u32) -> Monomial {
    vec![n - i, i, m - j, j]
}

/// Weight-basis monomials, `i` outer and `j` inner.
pub fn weight_basis(n: u32, m: u32) -> Vec<Poly> {
    let mut out = Vec::with_capacity(dim(n, m));
    for i in 0..=n {
        for j in 0..=m {
            out.push(Poly::monomial(form_ctx(), basis_exps(n, m, i, j), one()));
        }
    }
    out
}

/// Position of a weight-basis monomial in `weight_basis(n, m)`.
pub fn basis_index(m: u32, exps: &[u32]) -> usize {
    (exps[1] * (m + 1) + exps[3]) as usize
}

/// Bidegree of a nonzero polynomial if it is bihomogeneous in the form
/// variables.
pub fn bidegree_of(p: &Poly) -> Option<(u32, u32)> {
    let mut found = None;
    for (e, _) in p.split_by(&FORM_VARS) {
        let d = (e[0] + e[1], e[2] + e[3]);
        match found {
            None => found = Some(d),
            Some(f) if f != d => return None,
            _ => {}
        }
    }
    found
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiForm {
    n: u32,
    m: u32,
    value: Poly,
}

impl BiForm {
    pub fn new(n: u32, m: u32, value: Poly) -> Result<BiForm> {
        if !value.is_zero() && bidegree_of(&value) != Some((n, m)) {
            return Err(FormError::NotBihomogeneous { n, m });
        }
        Ok(BiForm { n, m, value })
    }

    /// Infers the bidegree; the zero polynomial is rejected.
    pub fn infer(value: Poly) -> Result<BiForm> {
        if value.is_zero() {
            return Err(FormError::ZeroBidegree);
        }
        let (n, m) = bidegree_of(&value).ok_or_else(|| {
            let d = value.total_degree().unwrap_or(0);
            FormError::Degree(format!("polynomial of total degree {d} is not bihomogeneous"))
        })?;
        Ok(BiForm { n, m, value })
    }

    pub fn zero(n: u32, m: u32) -> BiForm {
        BiForm { n, m, value: Poly::zero(form_ctx()) }
    }

    pub fn basis(n: u32, m: u32, i: u32, j: u32) -> BiForm {
        BiForm { n, m, value: Poly::monomial(form_ctx(), basis_exps(n, m, i, j), one()) }
    }

    /// Builds `sum c_k e_k` over the weight basis.
    pub fn from_coords(n: u32, m: u32, coords: &[Poly]) -> Result<BiForm> {
        if coords.len() != dim(n, m) {
            return Err(FormError::Degree(format!("{} coordinates for V({n},{m})", coords.len())));
        }
        let mut value = Poly::zero(form_ctx());
        for (c, b) in coords.iter().zip(weight_basis(n, m)) {
            if !c.is_zero() {
                value = value.add_poly(&c.mul_poly(&b));
            }
        }
        Ok(BiForm { n, m, value })
    }

    pub fn from_scalars(n: u32, m: u32, coords: &[Scalar]) -> Result<BiForm> {
        let polys: Vec<Poly> = coords.iter().map(|c| Poly::constant(form_ctx(), c.clone())).collect();
        BiForm::from_coords(n, m, &polys)
    }

    /// Generic element whose coordinates are fresh variables `prefix0..`.
    pub fn symbolic(n: u32, m: u32, prefix: &str) -> BiForm {
        let names: Vec<String> = (0..dim(n, m)).map(|k| format!("{prefix}{k}")).collect();
        let coords: Vec<Poly> = names.iter().map(|s| Poly::variable(s)).collect();
        BiForm::from_coords(n, m, &coords).expect("matching dimension")
    }

    /// Coordinates in the weight basis (polynomials in the non-form variables).
    pub fn coords(&self) -> Vec<Poly> {
        let ctx = self.value.ctx().clone();
        let mut out = vec![Poly::zero(&ctx); dim(self.n, self.m)];
        for (e, c) in self.value.split_by(&FORM_VARS) {
            out[basis_index(self.m, &e)] = c;
        }
        out
    }

    /// Coordinates when they are all constants.
    pub fn scalar_coords(&self) -> Result<Vec<Scalar>> {
        self.coords()
            .iter()
            .map(|c| c.constant_value().ok_or(FormError::Alg(exactalg::AlgError::NotConstant)))
            .collect()
    }

    pub fn bidegree(&self) -> (u32, u32) {
        (self.n, self.m)
    }

    pub fn value(&self) -> &Poly {
        &self.value
    }

    pub fn into_value(self) -> Poly {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn same_space(&self, other: &BiForm) -> Result<()> {
        if self.bidegree() != other.bidegree() {
            return Err(FormError::Degree(format!(
                "V{:?} and V{:?} cannot be added",
                self.bidegree(),
                other.bidegree()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &BiForm) -> Result<BiForm> {
        self.same_space(other)?;
        Ok(BiForm { n: self.n, m: self.m, value: self.value.add_poly(&other.value) })
    }

    pub fn sub(&self, other: &BiForm) -> Result<BiForm> {
        self.same_space(other)?;
        Ok(BiForm { n: self.n, m: self.m, value: self.value.sub_poly(&other.value) })
    }

    pub fn scale(&self, c: &Scalar) -> BiForm {
        BiForm { n: self.n, m: self.m, value: self.value.scale(c) }
    }

    /// Multiplies by a coefficient free of form variables.
    pub fn scale_poly(&self, c: &Poly) -> Result<BiForm> {
        if bidegree_of(c).is_some_and(|d| d != (0, 0)) {
            return Err(FormError::Degree("coefficient involves form variables".into()));
        }
        Ok(BiForm { n: self.n, m: self.m, value: self.value.mul_poly(c) })
    }

    /// Plain product, which lands in V(n1+n2, m1+m2).
    pub fn mul(&self, other: &BiForm) -> BiForm {
        BiForm { n: self.n + other.n, m: self.m + other.m, value: self.value.mul_poly(&other.value) }
    }

    /// Partial derivative in one form variable.
    pub fn diff(&self, var: &str) -> Result<BiForm> {
        let (n, m) = match var {
            X1 | Y1 if self.n > 0 => (self.n - 1, self.m),
            X2 | Y2 if self.m > 0 => (self.n, self.m - 1),
            X1 | Y1 | X2 | Y2 => return Ok(BiForm::zero(self.n.saturating_sub(1), self.m)),
            _ => return Err(FormError::Degree(format!("`{var}` is not a form variable"))),
        };
        Ok(BiForm { n, m, value: self.value.diff(var, 1) })
    }
}

impl fmt::Display for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Raw two-slot pairing on polynomials with no range checks.
pub fn pair_polys(u: &Poly, v: &Poly, p1: u32, p2: u32) -> Poly {
    let mut acc = Poly::zero(form_ctx());
    for k in 0..=p1 {
        for l in 0..=p2 {
            let du = u.diff_multi(&[(X1, k), (Y1, p1 - k), (X2, l), (Y2, p2 - l)]);
            if du.is_zero() {
                continue;
            }
            let dv = v.diff_multi(&[(X1, p1 - k), (Y1, k), (X2, p2 - l), (Y2, l)]);
            if dv.is_zero() {
                continue;
            }
            let mut c = binomial(p1, k) * binomial(p2, l);
            if (k + l) % 2 == 1 {
                c = -c;
            }
            acc.add_assign_scaled(&du.mul_poly(&dv), &c);
        }
    }
    acc.scale(&(one() / (factorial(p1) * factorial(p2))))
}

/// Two-slot pairing `<u,v>_{p1,p2}`.
pub fn transvectant2(u: &BiForm, v: &BiForm, p1: u32, p2: u32) -> Result<BiForm> {
    let (n1, m1) = u.bidegree();
    let (n2, m2) = v.bidegree();
    if p1 > n1.min(n2) || p2 > m1.min(m2) {
        return Err(FormError::OrderOutOfRange { p1, p2, left: (n1, m1), right: (n2, m2) });
    }
    Ok(BiForm { n: n1 + n2 - 2 * p1, m: m1 + m2 - 2 * p2, value: pair_polys(&u.value, &v.value, p1, p2) })
}

/// Single-slot transvectant on forms in the first variable pair.
pub fn transvectant(u: &BiForm, v: &BiForm, p: u32) -> Result<BiForm> {
    if u.bidegree().1 != 0 || v.bidegree().1 != 0 {
        return Err(FormError::Degree("single-slot transvectant takes forms in x1, y1 only".into()));
    }
    transvectant2(u, v, p, 0)
}

/// Table of pairings between weight-basis elements, cached by the caller:
/// entry `[a][b]` is the weight-basis coordinate vector of `<e_a, f_b>`.
pub fn basis_pairing_table(
    left: (u32, u32),
    right: (u32, u32),
    p1: u32,
    p2: u32,
) -> Result<(u32, u32, Vec<Vec<BTreeMap<usize, Scalar>>>)> {
    if p1 > left.0.min(right.0) || p2 > left.1.min(right.1) {
        return Err(FormError::OrderOutOfRange { p1, p2, left, right });
    }
    let (n, m) = (left.0 + right.0 - 2 * p1, left.1 + right.1 - 2 * p2);
    let lb = weight_basis(left.0, left.1);
    let rb = weight_basis(right.0, right.1);
    let table = lb
        .iter()
        .map(|a| {
            rb.iter()
                .map(|b| {
                    pair_polys(a, b, p1, p2)
                        .iter()
                        .map(|(e, c)| (basis_index(m, e), c.clone()))
                        .collect::<BTreeMap<usize, Scalar>>()
                })
                .collect()
        })
        .collect();
    Ok((n, m, table))
}

/// `int(k)` lifted to a constant in the form context.
pub fn constant(c: i64) -> Poly {
    Poly::constant(form_ctx(), int(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactalg::parse::parse_poly;

    fn bf(s: &str) -> BiForm {
        BiForm::infer(parse_poly(s).unwrap()).unwrap()
    }

    #[test]
    fn bihomogeneity_checked() {
        assert!(BiForm::new(1, 1, parse_poly("x1*x2 + y1*y2").unwrap()).is_ok());
        assert!(BiForm::new(1, 1, parse_poly("x1*x2 + y1").unwrap()).is_err());
        assert_eq!(bf("a*x1^2*y2 - b*y1^2*x2").bidegree(), (2, 1));
    }

    #[test]
    fn single_slot_examples() {
        let x2 = bf("x1^2");
        let y2 = bf("y1^2");
        assert_eq!(transvectant(&x2, &y2, 0).unwrap().value(), &parse_poly("x1^2*y1^2").unwrap());
        assert_eq!(transvectant(&x2, &y2, 1).unwrap().value(), &parse_poly("-4*x1*y1").unwrap());
        assert_eq!(transvectant(&x2, &y2, 2).unwrap().value(), &parse_poly("2").unwrap());
        assert!(transvectant(&x2, &y2, 3).is_err());
    }

    #[test]
    fn two_slot_example() {
        let u = bf("x1*x2^2");
        let v = bf("y1*y2^2");
        assert_eq!(transvectant2(&u, &v, 1, 2).unwrap().value(), &parse_poly("-2").unwrap());
        assert_eq!(transvectant2(&u, &v, 0, 0).unwrap().value(), &parse_poly("x1*x2^2*y1*y2^2").unwrap());
    }

    #[test]
    fn coords_round_trip() {
        let f = bf("3*x1*x2^2 - c*y1*x2*y2 + y1*y2^2");
        let back = BiForm::from_coords(1, 2, &f.coords()).unwrap();
        assert_eq!(back, f);
        assert_eq!(weight_basis(1, 2)[4], parse_poly("y1*x2*y2").unwrap());
    }

    #[test]
    fn pairing_table_matches_direct() {
        let (n, m, t) = basis_pairing_table((1, 2), (1, 2), 1, 1).unwrap();
        assert_eq!((n, m), (0, 2));
        let lb = weight_basis(1, 2);
        for a in 0..6 {
            for b in 0..6 {
                let direct = pair_polys(&lb[a], &lb[b], 1, 1);
                let from_table: Vec<Poly> = (0..3).map(|k| Poly::constant(form_ctx(), t[a][b].get(&k).cloned().unwrap_or_default())).collect();
                assert_eq!(BiForm::from_coords(0, 2, &from_table).unwrap().into_value(), direct);
            }
        }
    }
}
