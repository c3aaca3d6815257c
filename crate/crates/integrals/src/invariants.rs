//! Invariant polynomials of the curvature space and the two first
//! integrals built from them.

use crate::point::CurvaturePoint;
use binforms::biform::pair_polys;
use excalc::system::{a02_form, a20_form, b_form, d1_d2, param, C};
use exactalg::scalar::{int, Scalar};
use exactalg::Poly;
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// Value of the constant `c`: kept as a parameter or fixed.
#[derive(Clone, Debug, PartialEq)]
pub enum CValue {
    Symbolic,
    Value(Scalar),
}

impl CValue {
    pub fn apply(&self, p: &Poly) -> Poly {
        match self {
            CValue::Symbolic => p.clone(),
            CValue::Value(v) => p.subs_values(&BTreeMap::from([(C.to_string(), v.clone())])),
        }
    }
}

/// The building blocks of the first integrals as polynomials in the
/// parameters (and the form variables, for the non-scalar ones).
#[derive(Clone, Debug)]
pub struct Invariants {
    pub d1: Poly,
    pub d2: Poly,
    pub e1: Poly,
    pub e2: Poly,
    pub b02: Poly,
    pub b20: Poly,
    pub b24: Poly,
    pub p20: Poly,
    /// `<<a20,a20>_{0,0},a20>_{2,0}`, as printed. It lies in V(2,0), so
    /// its (2,4)-pairing with `b24` vanishes identically.
    pub p24_literal: Poly,
    /// `<<a02,a02>_{0,0},a20>_{0,0}`, the V(2,4) element that makes the
    /// second integral conserved.
    pub p24: Poly,
    pub p02: Poly,
}

impl Invariants {
    pub fn symbolic() -> &'static Invariants {
        static INV: OnceLock<Invariants> = OnceLock::new();
        INV.get_or_init(Invariants::build)
    }

    fn build() -> Invariants {
        let (a20, a02, b) = (a20_form(), a02_form(), b_form());
        let (d1, d2) = d1_d2();
        let e1 = pair_polys(&pair_polys(&a20, &b, 1, 0), &b, 1, 2);
        let e2 = pair_polys(&pair_polys(&a02, &b, 0, 1), &b, 1, 2);
        let b02 = pair_polys(&b, &b, 1, 1);
        let b20 = pair_polys(&b, &b, 0, 2);
        let b24 = pair_polys(&b, &b, 0, 0);
        let a20a02 = a20.mul_poly(&a02);
        let a02sq = a02.mul_poly(&a02);
        let p20 = pair_polys(&a20a02, &a02, 0, 2);
        let p24_literal = pair_polys(&a20.mul_poly(&a20), &a20, 2, 0);
        let p24 = a02sq.mul_poly(&a20);
        let mut p02 = pair_polys(&a20a02, &a20, 2, 0).scale(&int(16));
        p02.add_assign_scaled(&pair_polys(&a02sq, &a02, 0, 2), &int(9));
        p02.add_assign_scaled(&param(C).mul_poly(&a02), &int(-12));
        p02.add_assign_scaled(&b02, &int(3));
        Invariants { d1, d2, e1, e2, b02, b20, b24, p20, p24_literal, p24, p02 }
    }

    /// All invariants evaluated at a point.
    pub fn at(&self, pt: &CurvaturePoint) -> Invariants {
        let v = pt.values();
        let e = |p: &Poly| p.subs_values(&v);
        Invariants {
            d1: e(&self.d1),
            d2: e(&self.d2),
            e1: e(&self.e1),
            e2: e(&self.e2),
            b02: e(&self.b02),
            b20: e(&self.b20),
            b24: e(&self.b24),
            p20: e(&self.p20),
            p24_literal: e(&self.p24_literal),
            p24: e(&self.p24),
            p02: e(&self.p02),
        }
    }

    pub fn named(&self) -> Vec<(&'static str, &Poly)> {
        vec![
            ("d1", &self.d1),
            ("d2", &self.d2),
            ("e1", &self.e1),
            ("e2", &self.e2),
            ("b02", &self.b02),
            ("b20", &self.b20),
            ("b24", &self.b24),
            ("p20", &self.p20),
            ("p24", &self.p24),
            ("p02", &self.p02),
        ]
    }
}

pub fn invariant_functions(pt: &CurvaturePoint) -> Invariants {
    Invariants::symbolic().at(pt)
}

/// Which transcription of the first integrals to build. The variants
/// other than `Standard` are controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Standard,
    /// `72 e1` replaced by `71 e1`.
    PerturbedE1,
    /// The printed `p24`, whose pairing term drops out.
    LiteralP24,
}

fn build_integrals(variant: Variant) -> (Poly, Poly) {
    let inv = Invariants::symbolic();
    let c = param(C);
    let (d1, d2) = (&inv.d1, &inv.d2);
    let lin = |k1: i64, k2: i64, kc: i64| {
        let mut p = d1.scale(&int(k1));
        p.add_assign_scaled(d2, &int(k2));
        p.add_assign_scaled(&c, &int(kc));
        p
    };
    let mut f1 = lin(4, -9, 0).mul_poly(&lin(4, 27, -6));
    let k_e1 = if variant == Variant::PerturbedE1 { 71 } else { 72 };
    f1.add_assign_scaled(&inv.e1, &int(k_e1));
    f1.add_assign_scaled(&inv.e2, &int(-54));

    let q = lin(4, 9, -3);
    let mut f2 = d2.mul_poly(&q).mul_poly(&q).scale(&int(4));
    f2.add_assign_scaled(&pair_polys(&inv.p20, &inv.b20, 2, 0), &int(96));
    f2.add_assign_scaled(&pair_polys(&inv.p02, &inv.b02, 0, 2), &int(3));
    let p24 = if variant == Variant::LiteralP24 { &inv.p24_literal } else { &inv.p24 };
    f2.add_assign_scaled(&pair_polys(p24, &inv.b24, 2, 4), &int(48));
    (f1, f2)
}

/// `(f1, f2)` as polynomials in the parameters.
pub fn first_integrals_variant(c: &CValue, variant: Variant) -> (Poly, Poly) {
    static STANDARD: OnceLock<(Poly, Poly)> = OnceLock::new();
    let (f1, f2) = if variant == Variant::Standard {
        STANDARD.get_or_init(|| build_integrals(Variant::Standard)).clone()
    } else {
        build_integrals(variant)
    };
    (c.apply(&f1), c.apply(&f2))
}

pub fn first_integrals(c: &CValue) -> (Poly, Poly) {
    first_integrals_variant(c, Variant::Standard)
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactalg::scalar::zero;

    #[test]
    fn flat_point_has_vanishing_integrals() {
        let pt = CurvaturePoint::zero(int(5));
        let (f1, f2) = first_integrals(&CValue::Symbolic);
        assert_eq!(f1.eval(&pt.values()).unwrap(), zero());
        assert_eq!(f2.eval(&pt.values()).unwrap(), zero());
        for (name, p) in invariant_functions(&pt).named() {
            assert!(p.is_zero(), "{name}");
        }
    }

    #[test]
    fn literal_p24_pairing_drops_out() {
        let inv = Invariants::symbolic();
        assert!(!inv.p24_literal.is_zero());
        assert!(pair_polys(&inv.p24_literal, &inv.b24, 2, 4).is_zero());
        assert!(!pair_polys(&inv.p24, &inv.b24, 2, 4).is_zero());
    }

    #[test]
    fn odd_self_pairing_of_b_survives() {
        assert!(!Invariants::symbolic().b02.is_zero());
    }
}
