//! The sl2 x sl2 action on forms and the Lie algebra of the first slot
//! pairing structure.

use crate::biform::{transvectant2, BiForm, X1, X2, Y1, Y2};
use crate::error::{FormError, Result};
use exactalg::scalar::zero;
use exactalg::{Poly, Scalar};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    First,
    Second,
}

impl Slot {
    pub fn vars(self) -> (&'static str, &'static str) {
        match self {
            Slot::First => (X1, Y1),
            Slot::Second => (X2, Y2),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    E,
    F,
    H,
}

/// The six infinitesimal generators in a fixed order.
pub const GENERATORS: [(Gen, Slot); 6] = [
    (Gen::E, Slot::First),
    (Gen::F, Slot::First),
    (Gen::H, Slot::First),
    (Gen::E, Slot::Second),
    (Gen::F, Slot::Second),
    (Gen::H, Slot::Second),
];

/// Generator action on a raw polynomial: e = x d/dy, f = y d/dx,
/// h = x d/dx - y d/dy in the chosen slot.
pub fn act_poly(g: Gen, slot: Slot, p: &Poly) -> Poly {
    let (x, y) = slot.vars();
    let xv = Poly::variable(x);
    let yv = Poly::variable(y);
    match g {
        Gen::E => xv.mul_poly(&p.diff(y, 1)),
        Gen::F => yv.mul_poly(&p.diff(x, 1)),
        Gen::H => xv.mul_poly(&p.diff(x, 1)).sub_poly(&yv.mul_poly(&p.diff(y, 1))),
    }
}

pub fn act(g: Gen, slot: Slot, p: &BiForm) -> BiForm {
    let (n, m) = p.bidegree();
    BiForm::new(n, m, act_poly(g, slot, p.value())).expect("generators preserve bidegree")
}

/// Action of a trace-free matrix `[[a, b], [c, -a]] = a h + b e + c f`.
pub fn sl2_action(x: [[Scalar; 2]; 2], slot: Slot, p: &BiForm) -> Result<BiForm> {
    if &x[0][0] + &x[1][1] != zero() {
        return Err(FormError::Degree("matrix is not trace-free".into()));
    }
    let h = act(Gen::H, slot, p).scale(&x[0][0]);
    let e = act(Gen::E, slot, p).scale(&x[0][1]);
    let f = act(Gen::F, slot, p).scale(&x[1][0]);
    h.add(&e)?.add(&f)
}

/// Finite transposed action `(A.p)(x, y) = p((x, y) A)` in one slot. Entries
/// of `a` may be polynomials, which allows differentiating in a parameter.
pub fn group_action(a: [[Poly; 2]; 2], slot: Slot, p: &Poly) -> Result<Poly> {
    let (x, y) = slot.vars();
    let xv = Poly::variable(x);
    let yv = Poly::variable(y);
    let mut sub = BTreeMap::new();
    sub.insert(x.to_string(), xv.mul_poly(&a[0][0]).add_poly(&yv.mul_poly(&a[1][0])));
    sub.insert(y.to_string(), xv.mul_poly(&a[0][1]).add_poly(&yv.mul_poly(&a[1][1])));
    let p = p.embed(&exactalg::poly::merge_ctx(p.ctx(), crate::biform::form_ctx()))?;
    Ok(p.subs(&sub)?)
}

/// Element `p00 + p20 + p02` of the Lie algebra, acting on V(1,2).
#[derive(Clone, Debug, PartialEq)]
pub struct LieElt {
    pub p00: BiForm,
    pub p20: BiForm,
    pub p02: BiForm,
}

impl LieElt {
    pub fn new(p00: BiForm, p20: BiForm, p02: BiForm) -> Result<LieElt> {
        if p00.bidegree() != (0, 0) || p20.bidegree() != (2, 0) || p02.bidegree() != (0, 2) {
            return Err(FormError::Degree("Lie element needs bidegrees (0,0), (2,0), (0,2)".into()));
        }
        Ok(LieElt { p00, p20, p02 })
    }

    pub fn zero() -> LieElt {
        LieElt { p00: BiForm::zero(0, 0), p20: BiForm::zero(2, 0), p02: BiForm::zero(0, 2) }
    }

    pub fn from_coords(coords: &[Scalar]) -> Result<LieElt> {
        if coords.len() != 7 {
            return Err(FormError::Degree(format!("{} coordinates for a 7-dimensional algebra", coords.len())));
        }
        LieElt::new(
            BiForm::from_scalars(0, 0, &coords[0..1])?,
            BiForm::from_scalars(2, 0, &coords[1..4])?,
            BiForm::from_scalars(0, 2, &coords[4..7])?,
        )
    }

    /// Action on V(1,2) with unit weight on the scalar part.
    pub fn apply(&self, q: &BiForm) -> Result<BiForm> {
        double_bracket(self, q, &exactalg::scalar::one())
    }
}

/// `<<w, q>>_k = k p00 q + <p20, q>_{1,0} + <p02, q>_{0,1}`.
pub fn double_bracket(w: &LieElt, q: &BiForm, k: &Scalar) -> Result<BiForm> {
    let d = q.bidegree();
    if !matches!(d, (1, 2) | (2, 0) | (0, 2)) {
        return Err(FormError::Degree(format!("double bracket is defined on V(1,2), V(2,0), V(0,2), got V{d:?}")));
    }
    let mut out = BiForm::new(d.0, d.1, w.p00.value().mul_poly(q.value()))?.scale(k);
    if d.0 > 0 {
        out = out.add(&transvectant2(&w.p20, q, 1, 0)?)?;
    }
    if d.1 > 0 {
        out = out.add(&transvectant2(&w.p02, q, 0, 1)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactalg::parse::parse_poly;
    use exactalg::scalar::{int, one};

    fn bf(s: &str) -> BiForm {
        BiForm::infer(parse_poly(s).unwrap()).unwrap()
    }

    #[test]
    fn generator_examples() {
        assert_eq!(act(Gen::E, Slot::First, &bf("y1^3")), bf("3*x1*y1^2"));
        assert!(act(Gen::E, Slot::First, &bf("x1^3")).is_zero());
        assert_eq!(act(Gen::H, Slot::Second, &bf("x2^2*y2")), bf("x2^2*y2"));
        assert_eq!(act(Gen::F, Slot::Second, &bf("x1*x2")), bf("x1*y2"));
    }

    #[test]
    fn infinitesimal_matches_group_to_first_order() {
        let t = Poly::variable("t");
        let o = Poly::constant(t.ctx(), one());
        let z = Poly::zero(t.ctx());
        let p = parse_poly("x1^2*y1*x2 - 3*y1^3*y2 + x1*y1^2*y2").unwrap();
        let cases = [
            (Gen::E, [[o.clone(), t.clone()], [z.clone(), o.clone()]]),
            (Gen::F, [[o.clone(), z.clone()], [t.clone(), o.clone()]]),
            (Gen::H, [[o.add_poly(&t), z.clone()], [z.clone(), o.sub_poly(&t)]]),
        ];
        for (g, a) in cases {
            let moved = group_action(a, Slot::First, &p).unwrap();
            let mut at0 = BTreeMap::new();
            at0.insert("t".to_string(), int(0));
            let derivative = moved.diff("t", 1).subs_values(&at0);
            assert_eq!(derivative, act_poly(g, Slot::First, &p), "{g:?}");
        }
    }

    #[test]
    fn bracket_examples() {
        let q = bf("x1*x2^2 + 2*y1*x2*y2");
        let scalar_only = LieElt::new(BiForm::from_scalars(0, 0, &[int(1)]).unwrap(), BiForm::zero(2, 0), BiForm::zero(0, 2)).unwrap();
        assert_eq!(double_bracket(&scalar_only, &q, &one()).unwrap(), q);
        let p20 = bf("x1*y1");
        let w = LieElt::new(BiForm::zero(0, 0), p20.clone(), BiForm::zero(0, 2)).unwrap();
        assert_eq!(double_bracket(&w, &q, &int(1)).unwrap(), transvectant2(&p20, &q, 1, 0).unwrap());
        let a = bf("x1^2");
        assert_eq!(double_bracket(&scalar_only, &a, &int(-2)).unwrap(), a.scale(&int(-2)));
    }
}
