//! First integrals of the curvature map, the matrix of its differential
//! against the coframe, and certificates for its generic rank.

pub mod error;
pub mod fields;
pub mod invariants;
pub mod jmatrix;
pub mod point;
pub mod rank;

pub use error::{IntegralError, Result};
pub use invariants::{first_integrals, invariant_functions, CValue, Invariants, Variant};
pub use jmatrix::{assemble_j, gradient, gradient_rows, GradientRows, JMatrix, COLUMNS};
pub use point::{point_from_json, point_to_json, CurvaturePoint};
pub use rank::{rank_certificate, rank_dichotomy, structure_constants, RankCertificate, StructureConstants};

use serde::Serialize;

/// Outcome of the conservation check for both integrals.
#[derive(Clone, Debug, Serialize)]
pub struct FirstIntegralReport {
    /// Number of nonzero entries of `∇f_k · J` for each integral.
    pub nonzero_entries: [usize; 2],
    pub contraction_mismatches: Vec<String>,
}

impl FirstIntegralReport {
    pub fn holds(&self) -> bool {
        self.nonzero_entries == [0, 0] && self.contraction_mismatches.is_empty()
    }
}

pub fn first_integral_identity_variant(c: &CValue, variant: Variant) -> FirstIntegralReport {
    let j = assemble_j(c);
    let (f1, f2) = invariants::first_integrals_variant(c, variant);
    let count = |f: &exactalg::Poly| j.conservation_residual(f).iter().filter(|p| !p.is_zero()).count();
    FirstIntegralReport { nonzero_entries: [count(&f1), count(&f2)], contraction_mismatches: j.contraction_mismatches(c) }
}

/// `∇f_k · J ≡ 0` for both integrals.
pub fn first_integral_identity(c: &CValue) -> FirstIntegralReport {
    first_integral_identity_variant(c, Variant::Standard)
}

/// Generators of the `sl2 × sl2` action along which `f1` or `f2` fails to
/// be invariant, acting on the 12 curvature coordinates.
pub fn equivariance_defects() -> Vec<String> {
    use binforms::action::{act_poly, GENERATORS};
    use excalc::form::function_components;
    use excalc::system::{a02_form, a20_form, b_form};
    let (f1, f2) = first_integrals(&CValue::Symbolic);
    let blocks = [(a20_form(), (2, 0)), (a02_form(), (0, 2)), (b_form(), (1, 2))];
    let mut out = Vec::new();
    for (g, slot) in GENERATORS {
        let mut delta = Vec::new();
        for (form, (n, m)) in &blocks {
            delta.extend(function_components(&act_poly(g, slot, form), *n, *m).expect("action preserves bidegree"));
        }
        for (k, f) in [&f1, &f2].iter().enumerate() {
            let mut acc = exactalg::Poly::zero(excalc::system::system_ctx());
            for (gi, di) in gradient(f).iter().zip(&delta) {
                acc = acc.add_poly(&gi.mul_poly(di));
            }
            if !acc.is_zero() {
                out.push(format!("f{}:{g:?}{slot:?}", k + 1));
            }
        }
    }
    out
}

/// `d f_k = w_k f_k ω00` in the full structure group, for the weights 8
/// and 12.
pub fn scalar_weights_hold() -> bool {
    let sys = excalc::StructureSystem::new(excalc::Mode::G12);
    let (f1, f2) = first_integrals(&CValue::Symbolic);
    [(f1, 8), (f2, 12)].iter().all(|(f, w)| {
        let expected = excalc::FormExpr::generator(excalc::form::OMEGA00).mul_fn(&f.scale(&exactalg::scalar::int(*w)));
        sys.d_function(f) == expected
    })
}

/// `(f1, f2)` after substituting `a20 = 3/2 a02` and `b` the gradient form
/// of a symbolic cubic `u0..u3`.
pub fn restricted_integrals() -> Result<(exactalg::Poly, exactalg::Poly)> {
    use excalc::ideal::{gradient_form_b, restriction_substitution};
    let (f1, f2) = first_integrals(&CValue::Symbolic);
    let u: [exactalg::Poly; 4] = std::array::from_fn(|k| exactalg::Poly::variable(&format!("u{k}")));
    let mut sub = restriction_substitution();
    for (name, p) in excalc::system::B.iter().zip(gradient_form_b(&u)) {
        sub.insert(name.to_string(), p);
    }
    Ok((f1.subs(&sub)?, f2.subs(&sub)?))
}
