//! Structure equations of the torsion-free (and one torsionful) coframe,
//! and the exterior derivative they generate.

use crate::error::{CalcError, Result};
use crate::form::{
    bit, components, expand_in_basis, fpair, label, split_bidegree, theta_basis, valued, FormExpr, Mask, NGEN,
    OMEGA00, OMEGA02, OMEGA20, THETA,
};
use binforms::biform::{form_ctx, pair_polys, weight_basis};
use exactalg::scalar::{int, one, ratio};
use exactalg::{context, Ctx, Poly, Scalar};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

pub const A20: [&str; 3] = ["a20_0", "a20_1", "a20_2"];
pub const A02: [&str; 3] = ["a02_0", "a02_1", "a02_2"];
pub const B: [&str; 6] = ["b0", "b1", "b2", "b3", "b4", "b5"];
pub const C: &str = "c";
pub const S30: [&str; 4] = ["s30_0", "s30_1", "s30_2", "s30_3"];

/// The 13 curvature parameters in layout order: a20, a02, b, c.
pub fn parameters() -> Vec<&'static str> {
    A20.iter().chain(&A02).chain(&B).chain(std::iter::once(&C)).copied().collect()
}

/// Context holding the form variables and every parameter name.
pub fn system_ctx() -> &'static Ctx {
    static CTX: OnceLock<Ctx> = OnceLock::new();
    CTX.get_or_init(|| context(binforms::biform::FORM_VARS.iter().copied().chain(parameters()).chain(S30)))
}

pub fn param(name: &str) -> Poly {
    Poly::var_in(system_ctx(), name).unwrap_or_else(|_| Poly::variable(name))
}

fn cst(c: Scalar) -> Poly {
    Poly::constant(system_ctx(), c)
}

pub fn a20_form() -> Poly {
    expand_in_basis(&A20.map(param), &weight_basis(2, 0))
}

pub fn a02_form() -> Poly {
    expand_in_basis(&A02.map(param), &weight_basis(0, 2))
}

pub fn b_form() -> Poly {
    expand_in_basis(&B.map(param), &weight_basis(1, 2))
}

pub fn s30_form() -> Poly {
    expand_in_basis(&S30.map(param), &weight_basis(3, 0))
}

pub fn theta_v() -> FormExpr {
    valued(&THETA, &theta_basis())
}

pub fn omega20_v() -> FormExpr {
    valued(&OMEGA20, &weight_basis(2, 0))
}

pub fn omega02_v() -> FormExpr {
    valued(&OMEGA02, &weight_basis(0, 2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    /// Full structure group: scalar connection component present.
    G12,
    /// Unimodular reduction: scalar component zero, `c` constant.
    H12,
    /// G12 rules plus a constant first-slot cubic torsion term.
    TorsionS30,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Mode, String> {
        match s {
            "g12" => Ok(Mode::G12),
            "h12" => Ok(Mode::H12),
            "torsion-s30" => Ok(Mode::TorsionS30),
            _ => Err(format!("unknown mode `{s}` (expected g12, h12 or torsion-s30)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::G12 => "g12",
            Mode::H12 => "h12",
            Mode::TorsionS30 => "torsion-s30",
        })
    }
}

/// Every numeric coefficient of the rule set. Coefficients are
/// polynomials so that ansatz unknowns can be carried through.
#[derive(Clone, Debug)]
pub struct Coefficients {
    /// Weight of the scalar connection on the coframe.
    pub theta_scalar: Poly,
    /// Sign in front of the curvature in the second structure equation.
    pub curvature_sign: Poly,
    /// Scale of the quadratic connection term `<ω,ω>` in `dω`.
    pub omega_square: Poly,
    /// `[<a20,t12>_00, <a02,t01>_02]` then `[<a20,t01>_20, <a02,t10>_02, <a02,t12>_00]`.
    pub curvature: [Poly; 5],
    pub a_scalar: Poly,
    pub a_omega: Poly,
    /// `[<b,θ>_{0,2}, <b,θ>_{1,1}]`.
    pub a_b: [Poly; 2],
    pub b_scalar: Poly,
    pub b_omega: Poly,
    /// `[<<a20,a02>_00,θ>_{1,1}, <<a02,a02>_00,θ>_{0,2}]`.
    pub b_a: [Poly; 2],
    /// Coefficients of `d1`, `d2`, `c` in the scalar paired with θ.
    pub b_const: [Poly; 3],
    pub c_scalar: Poly,
    /// Extra 1-form added to `dc`, used by the derivation ansatz.
    pub c_extra: FormExpr,
}

impl Default for Coefficients {
    fn default() -> Coefficients {
        Coefficients {
            theta_scalar: cst(one()),
            curvature_sign: cst(int(-1)),
            omega_square: cst(ratio(-1, 2)),
            curvature: [int(-4), int(3), int(1), int(1), int(-7)].map(cst),
            a_scalar: cst(int(2)),
            a_omega: cst(int(-1)),
            a_b: [int(3), int(1)].map(cst),
            b_scalar: cst(int(3)),
            b_omega: cst(int(-1)),
            b_a: [int(2), int(1)].map(cst),
            b_const: [ratio(-4, 3), int(-7), int(1)].map(cst),
            c_scalar: cst(int(4)),
            c_extra: FormExpr::zero(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StructureSystem {
    mode: Mode,
    coefficients: Coefficients,
    gen_d: Vec<FormExpr>,
    par_d: BTreeMap<String, FormExpr>,
    params: Vec<String>,
}

/// The torsion-free coframe equation: `-(k ω00∧θ + <ω20,θ>_{1,0} + <ω02,θ>_{0,1})`
/// as a V(1,2)-valued 2-form, without the sign.
fn omega_on(theta_like: &FormExpr, k: &Poly) -> FormExpr {
    let w00 = FormExpr::generator(OMEGA00);
    w00.wedge(theta_like)
        .mul_fn(k)
        .add(&fpair(&omega20_v(), theta_like, 1, 0))
        .add(&fpair(&omega02_v(), theta_like, 0, 1))
}

/// `d1 = <a20,a20>_{2,0}` and `d2 = <a02,a02>_{0,2}`.
pub fn d1_d2() -> (Poly, Poly) {
    let a20 = a20_form();
    let a02 = a02_form();
    (pair_polys(&a20, &a20, 2, 0), pair_polys(&a02, &a02, 0, 2))
}

impl StructureSystem {
    pub fn new(mode: Mode) -> StructureSystem {
        StructureSystem::with_coefficients(mode, Coefficients::default()).expect("default rules are well formed")
    }

    pub fn with_coefficients(mode: Mode, coefficients: Coefficients) -> Result<StructureSystem> {
        let k = &coefficients;
        let th = theta_v();
        let w00 = FormExpr::generator(OMEGA00);
        let w20 = omega20_v();
        let w02 = omega02_v();
        let a20 = FormExpr::function(a20_form());
        let a02 = FormExpr::function(a02_form());
        let b = FormExpr::function(b_form());
        let c = param(C);

        let mut dtheta = omega_on(&th, &k.theta_scalar).neg();
        if mode == Mode::TorsionS30 {
            dtheta = dtheta.add(&torsion_term(&th));
        }

        let (om20, om02) = crate::derive::curvature_ansatz(&k.curvature);
        let dw20 = om20.mul_fn(&k.curvature_sign).add(&fpair(&w20, &w20, 1, 0).mul_fn(&k.omega_square));
        let dw02 = om02.mul_fn(&k.curvature_sign).add(&fpair(&w02, &w02, 0, 1).mul_fn(&k.omega_square));

        let mut gen_d = vec![FormExpr::zero(); NGEN];
        for (g, f) in THETA.iter().zip(components(&dtheta, 1, 2)?) {
            gen_d[*g] = f;
        }
        for (g, f) in OMEGA20.iter().zip(components(&dw20, 2, 0)?) {
            gen_d[*g] = f;
        }
        for (g, f) in OMEGA02.iter().zip(components(&dw02, 0, 2)?) {
            gen_d[*g] = f;
        }

        let da = w00
            .wedge(&a20.add(&a02))
            .mul_fn(&k.a_scalar)
            .add(&fpair(&w20, &a20, 1, 0).add(&fpair(&w02, &a02, 0, 1)).mul_fn(&k.a_omega))
            .add(&fpair(&b, &th, 0, 2).mul_fn(&k.a_b[0]))
            .add(&fpair(&b, &th, 1, 1).mul_fn(&k.a_b[1]));
        let mut split = split_bidegree(&da);
        let da20 = split.remove(&(2, 0)).unwrap_or_default();
        let da02 = split.remove(&(0, 2)).unwrap_or_default();
        if let Some(key) = split.keys().next() {
            return Err(CalcError::StrayBidegree(*key));
        }

        let (d1, d2) = d1_d2();
        let q = d1.mul_poly(&k.b_const[0]).add_poly(&d2.mul_poly(&k.b_const[1])).add_poly(&c.mul_poly(&k.b_const[2]));
        let a20a02 = pair_polys(a20.coefficient(0).unwrap(), a02.coefficient(0).unwrap(), 0, 0);
        let a02a02 = pair_polys(a02.coefficient(0).unwrap(), a02.coefficient(0).unwrap(), 0, 0);
        let db = w00
            .wedge(&b)
            .mul_fn(&k.b_scalar)
            .add(&fpair(&w20, &b, 1, 0).add(&fpair(&w02, &b, 0, 1)).mul_fn(&k.b_omega))
            .add(&fpair(&FormExpr::function(a20a02), &th, 1, 1).mul_fn(&k.b_a[0]))
            .add(&fpair(&FormExpr::function(a02a02), &th, 0, 2).mul_fn(&k.b_a[1]))
            .add(&fpair(&FormExpr::function(q), &th, 0, 0));
        let dc = w00.mul_fn(&c.mul_poly(&k.c_scalar)).add(&k.c_extra);

        let mut par_d = BTreeMap::new();
        for (name, f) in A20.iter().zip(components(&da20, 2, 0)?) {
            par_d.insert(name.to_string(), f);
        }
        for (name, f) in A02.iter().zip(components(&da02, 0, 2)?) {
            par_d.insert(name.to_string(), f);
        }
        for (name, f) in B.iter().zip(components(&db, 1, 2)?) {
            par_d.insert(name.to_string(), f);
        }
        par_d.insert(C.to_string(), dc);

        if mode == Mode::H12 {
            for f in gen_d.iter_mut().chain(par_d.values_mut()) {
                *f = f.drop_generator(OMEGA00);
            }
            par_d.insert(C.to_string(), FormExpr::zero());
        }

        let mut params: Vec<String> = parameters().iter().map(|s| s.to_string()).collect();
        if mode == Mode::TorsionS30 {
            params.extend(S30.iter().map(|s| s.to_string()));
        }
        Ok(StructureSystem { mode, coefficients, gen_d, par_d, params })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// `d` of coframe generator `g`.
    pub fn gen_d(&self, g: usize) -> &FormExpr {
        &self.gen_d[g]
    }

    /// `d` of a parameter; parameters without a rule are constants.
    pub fn par_d(&self, name: &str) -> FormExpr {
        self.par_d.get(name).cloned().unwrap_or_default()
    }

    /// Differential of a function of the parameters.
    pub fn d_function(&self, f: &Poly) -> FormExpr {
        let mut out = FormExpr::zero();
        for (name, rule) in &self.par_d {
            if f.var_index(name).is_none() || rule.is_zero() {
                continue;
            }
            let df = f.diff(name, 1);
            if !df.is_zero() {
                out.add_assign_scaled(&rule.mul_fn(&df), &one());
            }
        }
        out
    }

    /// `d` of an exterior monomial with unit coefficient.
    fn d_monomial(&self, mask: Mask) -> FormExpr {
        let mut out = FormExpr::zero();
        let mut before: Mask = 0;
        let mut pos = 0;
        for g in 0..NGEN {
            if mask & bit(g) == 0 {
                continue;
            }
            let after = mask & !((bit(g) << 1) - 1);
            let piece = FormExpr::monomial(before, Poly::one(form_ctx()))
                .wedge(&self.gen_d[g])
                .wedge(&FormExpr::monomial(after, Poly::one(form_ctx())));
            let c = if pos % 2 == 0 { one() } else { -one() };
            out.add_assign_scaled(&piece, &c);
            before |= bit(g);
            pos += 1;
        }
        out
    }

    /// The anti-derivation extending the rules.
    pub fn exterior_d(&self, e: &FormExpr) -> FormExpr {
        let mut out = FormExpr::zero();
        for (mask, f) in e.terms() {
            let unit = FormExpr::monomial(*mask, Poly::one(form_ctx()));
            out.add_assign_scaled(&self.d_function(f).wedge(&unit), &one());
            if *mask != 0 {
                out.add_assign_scaled(&self.d_monomial(*mask).mul_fn(f), &one());
            }
        }
        out
    }

    /// Labels and `d(d(.))` of the 13 generators followed by the parameters.
    pub fn d_squared(&self) -> Vec<(String, FormExpr)> {
        let mut out = Vec::new();
        for g in 0..NGEN {
            out.push((label(g).to_string(), self.exterior_d(&self.gen_d[g])));
        }
        for p in &self.params {
            out.push((p.clone(), self.exterior_d(&self.par_d(p))));
        }
        out
    }

    pub fn d_squared_report(&self) -> DSquaredReport {
        let residuals: Vec<Residual> = self
            .d_squared()
            .into_iter()
            .map(|(name, f)| Residual { name, terms: f.len(), residual: f })
            .collect();
        DSquaredReport { mode: self.mode, residuals }
    }

    /// Prediction for `d²θ` in the torsionful mode obtained by
    /// differentiating the torsion term by the Leibniz rule:
    /// `<<ω,Θ>> + <s30, <dθ,θ>_{0,1} - <θ,dθ>_{0,1}>_{2,0}`.
    pub fn torsion_prediction(&self) -> Result<Vec<FormExpr>> {
        let th = theta_v();
        let theta_t = torsion_term(&th);
        let dth = valued_from_gens(&self.gen_d[..6], &theta_basis());
        let dtt = fpair(&dth, &th, 0, 1).sub(&fpair(&th, &dth, 0, 1));
        let pred = omega_on(&theta_t, &self.coefficients.theta_scalar)
            .add(&fpair(&FormExpr::function(s30_form()), &dtt, 2, 0));
        components(&pred, 1, 2)
    }
}

fn torsion_term(th: &FormExpr) -> FormExpr {
    fpair(&FormExpr::function(s30_form()), &fpair(th, th, 0, 1), 2, 0)
}

/// `Σ forms[i] ⊗ basis[i]`.
pub fn valued_from_gens(forms: &[FormExpr], basis: &[Poly]) -> FormExpr {
    let mut out = FormExpr::zero();
    for (f, b) in forms.iter().zip(basis) {
        out.add_assign_scaled(&f.mul_fn(b), &one());
    }
    out
}

#[derive(Clone, Debug)]
pub struct Residual {
    pub name: String,
    pub terms: usize,
    pub residual: FormExpr,
}

#[derive(Clone, Debug)]
pub struct DSquaredReport {
    pub mode: Mode,
    pub residuals: Vec<Residual>,
}

impl DSquaredReport {
    pub fn all_zero(&self) -> bool {
        self.residuals.iter().all(|r| r.residual.is_zero())
    }

    pub fn nonzero(&self) -> Vec<&str> {
        self.residuals.iter().filter(|r| !r.residual.is_zero()).map(|r| r.name.as_str()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactalg::random::random_rational_point;

    #[test]
    fn constants_are_closed() {
        let sys = StructureSystem::new(Mode::G12);
        assert!(sys.exterior_d(&FormExpr::function(Poly::constant(form_ctx(), int(5)))).is_zero());
    }

    #[test]
    fn dc_scales_with_the_scalar_connection() {
        let sys = StructureSystem::new(Mode::G12);
        let dc = sys.exterior_d(&FormExpr::function(param(C)));
        assert_eq!(dc, FormExpr::generator(OMEGA00).mul_fn(&param(C).scale(&int(4))));
        let h = StructureSystem::new(Mode::H12);
        assert!(h.exterior_d(&FormExpr::function(param(C))).is_zero());
    }

    #[test]
    fn anti_derivation_on_products() {
        let sys = StructureSystem::new(Mode::G12);
        let vals = random_rational_point(&parameters(), 3);
        let alpha = FormExpr::generator(0).mul_fn(&param("a20_1")).add(&FormExpr::generator(8).mul_fn(&param("b2")));
        let beta = FormExpr::generator(OMEGA00).mul_fn(&param(C)).add(&FormExpr::generator(4));
        let lhs = sys.exterior_d(&alpha.wedge(&beta));
        let rhs = sys.exterior_d(&alpha).wedge(&beta).sub(&alpha.wedge(&sys.exterior_d(&beta)));
        assert_eq!(lhs.subs_values(&vals), rhs.subs_values(&vals));
    }

    #[test]
    fn mode_names_round_trip() {
        for m in [Mode::G12, Mode::H12, Mode::TorsionS30] {
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
        assert!("g13".parse::<Mode>().is_err());
    }
}
