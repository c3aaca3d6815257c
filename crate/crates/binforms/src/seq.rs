//! The short exact sequence `0 -> V_{k-1} -> V(1,k) -> V_{k+1} -> 0`, the
//! splitting of V(1,k), and divisibility by linear forms.
//!
//! `V_j` here always means forms in the second variable pair.

use crate::biform::{dim, form_ctx, weight_basis, BiForm, FORM_VARS, X1, X2, Y1, Y2};
use crate::error::{FormError, Result};
use exactalg::scalar::ratio;
use exactalg::{Poly, QMatrix};
use serde::Serialize;
use std::collections::BTreeMap;

/// `iota(u) = x1 (x) y2 u - y1 (x) x2 u`.
pub fn iota(u: &BiForm) -> Result<BiForm> {
    check(u, 0, None)?;
    let v = Poly::variable;
    let value = v(X1).mul_poly(&v(Y2)).sub_poly(&v(Y1).mul_poly(&v(X2))).mul_poly(u.value());
    BiForm::new(1, u.bidegree().1 + 1, value)
}

/// `pr(u1 (x) v) = u1 v`, identifying the first pair with the second.
pub fn pr(p: &BiForm) -> Result<BiForm> {
    check(p, 1, None)?;
    let mut sub = BTreeMap::new();
    sub.insert(X1.to_string(), Poly::variable(X2));
    sub.insert(Y1.to_string(), Poly::variable(Y2));
    let value = p.value().embed(&exactalg::poly::merge_ctx(p.value().ctx(), form_ctx()))?.subs(&sub)?;
    BiForm::new(0, p.bidegree().1 + 1, value)
}

/// `eta(u) = 1/(k+1) (x1 (x) u_x + y1 (x) u_y)` for u of degree k+1.
pub fn eta(u: &BiForm) -> Result<BiForm> {
    check(u, 0, None)?;
    let d = u.bidegree().1;
    if d == 0 {
        return Err(FormError::Degree("eta needs a form of positive degree".into()));
    }
    let value = gradient_lift(u.value()).scale(&ratio(1, d as i64));
    BiForm::new(1, d - 1, value)
}

/// `x1 (x) u_x + y1 (x) u_y` without normalization.
pub fn gradient_lift(u: &Poly) -> Poly {
    Poly::variable(X1).mul_poly(&u.diff(X2, 1)).add_poly(&Poly::variable(Y1).mul_poly(&u.diff(Y2, 1)))
}

fn check(u: &BiForm, n: u32, m: Option<u32>) -> Result<()> {
    let (a, b) = u.bidegree();
    if a != n || m.is_some_and(|m| m != b) {
        return Err(FormError::Degree(format!("unexpected bidegree ({a},{b})")));
    }
    Ok(())
}

/// Matrix of a linear map between weight bases, computed by applying it to
/// basis elements.
pub fn matrix_of(from: (u32, u32), to: (u32, u32), f: impl Fn(&BiForm) -> Result<BiForm>) -> Result<QMatrix> {
    let basis = weight_basis(from.0, from.1);
    let mut cols = Vec::with_capacity(basis.len());
    for b in basis {
        let image = f(&BiForm::new(from.0, from.1, b)?)?;
        if image.bidegree() != to && !image.is_zero() {
            return Err(FormError::Degree("map lands in an unexpected space".into()));
        }
        let image = BiForm::new(to.0, to.1, image.into_value())?;
        cols.push(image.scalar_coords()?);
    }
    Ok(QMatrix::from_cols(&cols, dim(to.0, to.1)))
}

#[derive(Clone, Debug)]
pub struct SeqMaps {
    pub k: u32,
    pub iota: QMatrix,
    pub pr: QMatrix,
    pub eta: QMatrix,
}

pub fn seq_maps(k: u32) -> Result<SeqMaps> {
    if k == 0 {
        return Err(FormError::Degree("k must be at least 1".into()));
    }
    Ok(SeqMaps {
        k,
        iota: matrix_of((0, k - 1), (1, k), iota)?,
        pr: matrix_of((1, k), (0, k + 1), pr)?,
        eta: matrix_of((0, k + 1), (1, k), eta)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SeqReport {
    pub k: u32,
    pub pr_iota_zero: bool,
    pub pr_eta_identity: bool,
    pub rank_iota: usize,
    pub rank_pr: usize,
    pub exact: bool,
}

impl SeqMaps {
    /// Exactness bookkeeping: iota injective, pr surjective, pr iota = 0
    /// and the ranks add up to dim V(1,k).
    pub fn report(&self) -> SeqReport {
        let k = self.k;
        let pr_iota = self.pr.mul(&self.iota).expect("composable");
        let pr_eta = self.pr.mul(&self.eta).expect("composable");
        let rank_iota = self.iota.rank();
        let rank_pr = self.pr.rank();
        let exact = rank_iota == k as usize && rank_pr == (k + 2) as usize && rank_iota + rank_pr == dim(1, k);
        SeqReport {
            k,
            pr_iota_zero: pr_iota.is_zero(),
            pr_eta_identity: pr_eta == QMatrix::identity((k + 2) as usize),
            rank_iota,
            rank_pr,
            exact: exact && pr_iota.is_zero(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitReport {
    pub k: u32,
    pub dim_vprime: usize,
    pub dim_vdprime: usize,
    pub dim_sum: usize,
    pub dim_intersection: usize,
    #[serde(skip)]
    pub vprime: Vec<BiForm>,
    #[serde(skip)]
    pub vdprime: Vec<BiForm>,
}

impl SplitReport {
    pub fn is_direct_sum(&self) -> bool {
        self.dim_sum == dim(1, self.k) && self.dim_intersection == 0
    }
}

/// V' = gradient lifts of V_{k+1}, V'' = iota(V_{k-1}).
pub fn vprime_split(k: u32) -> Result<SplitReport> {
    let maps = seq_maps(k)?;
    let vprime: Vec<BiForm> = weight_basis(0, k + 1)
        .iter()
        .map(|u| BiForm::new(1, k, gradient_lift(u)))
        .collect::<Result<_>>()?;
    let vdprime: Vec<BiForm> = weight_basis(0, k - 1)
        .iter()
        .map(|u| iota(&BiForm::new(0, k - 1, u.clone())?))
        .collect::<Result<_>>()?;
    let to_rows = |fs: &[BiForm]| -> Result<QMatrix> {
        Ok(QMatrix::from_rows(fs.iter().map(|f| f.scalar_coords()).collect::<Result<_>>()?)?)
    };
    let a = to_rows(&vprime)?;
    let b = to_rows(&vdprime)?;
    let dim_vprime = a.rank();
    let dim_vdprime = b.rank();
    let dim_sum = a.vstack(&b)?.rank();
    debug_assert_eq!(maps.iota.rank(), dim_vdprime);
    Ok(SplitReport {
        k,
        dim_vprime,
        dim_vdprime,
        dim_sum,
        dim_intersection: dim_vprime + dim_vdprime - dim_sum,
        vprime,
        vdprime,
    })
}

/// `p = x1 (x) p1 + y1 (x) p2`.
pub fn components(p: &BiForm) -> Result<(Poly, Poly)> {
    check(p, 1, None)?;
    let v = p.value();
    let mut p1 = Poly::zero(form_ctx());
    let mut p2 = Poly::zero(form_ctx());
    let ctx = exactalg::poly::merge_ctx(v.ctx(), form_ctx());
    for (e, c) in v.split_by(&[X1, Y1]) {
        let rest = c.embed(&ctx)?;
        if e == [1, 0] {
            p1 = rest;
        } else {
            p2 = rest;
        }
    }
    Ok((p1, p2))
}

/// Whether the linear form r in the second pair divides both components.
pub fn divides(r: &BiForm, p: &BiForm) -> Result<bool> {
    if r.bidegree() != (0, 1) {
        return Err(FormError::Degree("divisor must be a linear form in x2, y2".into()));
    }
    if r.is_zero() {
        return Err(FormError::Degree("divisor is zero".into()));
    }
    let (p1, p2) = components(p)?;
    Ok([p1, p2].iter().all(|c| c.is_zero() || c.div_exact(r.value()).is_ok()))
}

/// Checks that every term involves only form variables.
pub fn is_numeric(f: &BiForm) -> bool {
    f.value().used_vars().iter().all(|v| FORM_VARS.contains(&v.as_str()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactalg::parse::parse_poly;

    fn bf(s: &str) -> BiForm {
        BiForm::infer(parse_poly(s).unwrap()).unwrap()
    }

    #[test]
    fn iota_and_pr_examples() {
        assert_eq!(iota(&bf("x2^1")).unwrap(), bf("x1*x2*y2 - y1*x2^2"));
        assert_eq!(pr(&bf("x1*x2^2")).unwrap(), bf("x2^3"));
    }

    #[test]
    fn exactness() {
        for k in 1..=4 {
            let r = seq_maps(k).unwrap().report();
            assert!(r.pr_iota_zero && r.pr_eta_identity && r.exact, "{r:?}");
        }
    }

    #[test]
    fn splittings() {
        let s = vprime_split(2).unwrap();
        assert_eq!((s.dim_vprime, s.dim_vdprime, s.dim_sum, s.dim_intersection), (4, 2, 6, 0));
        let s = vprime_split(1).unwrap();
        assert_eq!((s.dim_vprime, s.dim_vdprime), (3, 1));
        assert!(s.is_direct_sum());
    }

    #[test]
    fn divisibility() {
        assert!(divides(&bf("y2"), &bf("x1*y2^2")).unwrap());
        assert!(!divides(&bf("x2"), &bf("x1*y2^2")).unwrap());
        assert!(divides(&bf("x2 + 2*y2"), &bf("x1*(x2+2*y2)*x2 - y1*(x2+2*y2)^2")).unwrap());
        assert!(divides(&BiForm::zero(0, 1), &bf("x1*x2")).is_err());
    }
}
