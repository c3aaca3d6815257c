//! Vector fields given by their contractions with the coframe: interior
//! products, Lie derivatives by Cartan's formula, and brackets.

use crate::error::{CalcError, Result};
use crate::form::{bit, label, FormExpr, Mask, NGEN};
use crate::system::StructureSystem;
use exactalg::scalar::one;
use exactalg::Poly;
use serde::Serialize;

/// A vector field on the coframe bundle, recorded as `ι_Z e_g` for every
/// coframe generator `e_g`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    contractions: Vec<Poly>,
}

impl VectorField {
    pub fn new(contractions: Vec<Poly>) -> Result<VectorField> {
        if contractions.len() != NGEN {
            return Err(CalcError::Shape { expected: NGEN, got: contractions.len() });
        }
        Ok(VectorField { contractions })
    }

    pub fn contraction(&self, g: usize) -> &Poly {
        &self.contractions[g]
    }

    pub fn is_zero(&self) -> bool {
        self.contractions.iter().all(Poly::is_zero)
    }

    /// Interior product, an anti-derivation of degree -1.
    pub fn interior(&self, f: &FormExpr) -> FormExpr {
        let mut out = FormExpr::zero();
        for (mask, p) in f.terms() {
            let mut pos = 0;
            for g in 0..NGEN {
                if mask & bit(g) == 0 {
                    continue;
                }
                let z = &self.contractions[g];
                if !z.is_zero() {
                    let c = if pos % 2 == 0 { one() } else { -one() };
                    out.add_term(mask & !bit(g) as Mask, &p.mul_poly(z), &c);
                }
                pos += 1;
            }
        }
        out
    }

    /// `Z(f) = ι_Z df` for a function of the parameters.
    pub fn apply(&self, sys: &StructureSystem, f: &Poly) -> Poly {
        self.interior(&sys.d_function(f)).coefficient(0).cloned().unwrap_or_else(|| Poly::zero(binforms::biform::form_ctx()))
    }

    /// `𝔏_Z e_g = ι_Z d e_g + d(ι_Z e_g)`.
    pub fn lie_derivative_of_generator(&self, sys: &StructureSystem, g: usize) -> FormExpr {
        self.interior(sys.gen_d(g)).add(&sys.d_function(&self.contractions[g]))
    }
}

/// `ι_{[Z1,Z2]} e_g = Z1(ι_{Z2} e_g) - Z2(ι_{Z1} e_g) - ι_{Z2} ι_{Z1} d e_g`.
pub fn bracket(sys: &StructureSystem, z1: &VectorField, z2: &VectorField) -> VectorField {
    let contractions = (0..NGEN)
        .map(|g| {
            let a = z1.apply(sys, z2.contraction(g));
            let b = z2.apply(sys, z1.contraction(g));
            let c = z2.interior(&z1.interior(sys.gen_d(g)));
            let c = c.coefficient(0).cloned();
            let mut out = a.sub_poly(&b);
            if let Some(c) = c {
                out = out.sub_poly(&c);
            }
            out
        })
        .collect();
    VectorField { contractions }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    /// Generators whose Lie derivative along some field is nonzero.
    pub nonvanishing_lie_derivatives: Vec<String>,
    /// `𝔏_Z e = 0` for every coframe generator and both fields.
    pub lie_derivatives_vanish: bool,
    /// `𝔏_Z e = e` for every coframe generator and both fields.
    pub lie_derivatives_identity: bool,
    /// `ι_{[Z1,Z2]} e = 0` for every coframe generator.
    pub bracket_vanishes: bool,
    pub fields_nonzero: bool,
}

/// Lie derivatives of the coframe along `z1`, `z2` and their bracket,
/// restricted to the generators listed in `gens`.
pub fn symmetry_fields_check(sys: &StructureSystem, z1: &VectorField, z2: &VectorField, gens: &[usize]) -> SymmetryReport {
    let mut bad = Vec::new();
    let mut identity = true;
    for (k, z) in [z1, z2].iter().enumerate() {
        for &g in gens {
            let l = z.lie_derivative_of_generator(sys, g);
            if !l.is_zero() {
                bad.push(format!("Z{}:{}", k + 1, label(g)));
            }
            if l != FormExpr::generator(g) {
                identity = false;
            }
        }
    }
    let br = bracket(sys, z1, z2);
    SymmetryReport {
        lie_derivatives_vanish: bad.is_empty(),
        nonvanishing_lie_derivatives: bad,
        lie_derivatives_identity: identity,
        bracket_vanishes: gens.iter().all(|g| br.contraction(*g).is_zero()),
        fields_nonzero: !z1.is_zero() && !z2.is_zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{param, Mode};
    use exactalg::scalar::int;

    fn coord_field(g: usize) -> VectorField {
        let mut c = vec![Poly::zero(binforms::biform::form_ctx()); NGEN];
        c[g] = Poly::one(binforms::biform::form_ctx());
        VectorField::new(c).unwrap()
    }

    #[test]
    fn interior_is_an_anti_derivation() {
        let z = VectorField::new((0..NGEN).map(|g| param("b1").scale(&int(g as i64 + 1))).collect()).unwrap();
        let a = FormExpr::generator(2).add(&FormExpr::generator(9).mul_fn(&param("c")));
        let b = FormExpr::generator(4).wedge(&FormExpr::generator(0));
        let lhs = z.interior(&a.wedge(&b));
        let rhs = z.interior(&a).wedge(&b).sub(&a.wedge(&z.interior(&b)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let sys = StructureSystem::new(Mode::H12);
        let z1 = coord_field(0);
        let z2 = VectorField::new((0..NGEN).map(|g| if g == 3 { param("a02_1") } else { Poly::zero(binforms::biform::form_ctx()) }).collect()).unwrap();
        let b12 = bracket(&sys, &z1, &z2);
        let b21 = bracket(&sys, &z2, &z1);
        for g in 0..NGEN {
            assert_eq!(*b12.contraction(g), b21.contraction(g).neg_poly());
        }
    }
}
