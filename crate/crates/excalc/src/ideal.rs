//! Reductions modulo ideals generated by constant-coefficient 1-forms,
//! the Frobenius test, and the restriction conditions built on it.

use crate::error::{CalcError, Result};
use crate::form::{bit, FormExpr, NGEN, OMEGA02, OMEGA20, THETA};
use crate::system::{param, Mode, StructureSystem, A02, A20, B};
use binforms::biform::{form_ctx, weight_basis};
use binforms::seq::gradient_lift;
use exactalg::linsys::linear_system;
use exactalg::scalar::{int, one, ratio};
use exactalg::{Poly, QMatrix, Scalar};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// Ideal generated by linear combinations of coframe generators.
#[derive(Clone, Debug)]
pub struct LinearIdeal {
    generators: Vec<Vec<(usize, Scalar)>>,
    /// Pivot generator -> its replacement in terms of the free generators.
    rules: BTreeMap<usize, Vec<(usize, Scalar)>>,
}

impl LinearIdeal {
    pub fn new(generators: Vec<Vec<(usize, Scalar)>>) -> Result<LinearIdeal> {
        let mut rows = Vec::new();
        for (k, g) in generators.iter().enumerate() {
            let mut row = vec![Scalar::zero(); NGEN];
            for (i, c) in g {
                if *i >= NGEN {
                    return Err(CalcError::BadIdealGenerator(k));
                }
                row[*i] += c;
            }
            rows.push(row);
        }
        let mut rules = BTreeMap::new();
        if !rows.is_empty() {
            let (r, pivots) = QMatrix::from_rows(rows)?.rref();
            for (k, p) in pivots.iter().enumerate() {
                let rest = (0..NGEN)
                    .filter(|j| !pivots.contains(j) && !r.get(k, *j).is_zero())
                    .map(|j| (j, -r.get(k, j).clone()))
                    .collect();
                rules.insert(*p, rest);
            }
        }
        Ok(LinearIdeal { generators, rules })
    }

    /// Ideal spanned by single generators.
    pub fn of_generators(gens: &[usize]) -> Result<LinearIdeal> {
        LinearIdeal::new(gens.iter().map(|g| vec![(*g, one())]).collect())
    }

    pub fn generator_forms(&self) -> Vec<FormExpr> {
        self.generators
            .iter()
            .map(|g| {
                let mut f = FormExpr::zero();
                for (i, c) in g {
                    f.add_term(bit(*i), &Poly::one(form_ctx()), c);
                }
                f
            })
            .collect()
    }

    fn image(&self, g: usize) -> FormExpr {
        match self.rules.get(&g) {
            None => FormExpr::generator(g),
            Some(rest) => {
                let mut f = FormExpr::zero();
                for (j, c) in rest {
                    f.add_term(bit(*j), &Poly::one(form_ctx()), c);
                }
                f
            }
        }
    }

    /// Normal form modulo the ideal: pivot generators are replaced by
    /// their expressions in the free ones, so the result vanishes iff the
    /// input lies in the ideal.
    pub fn reduce(&self, f: &FormExpr) -> FormExpr {
        let mut out = FormExpr::zero();
        for (mask, p) in f.terms() {
            let mut acc = FormExpr::function(p.clone());
            for g in 0..NGEN {
                if mask & bit(g) != 0 {
                    acc = acc.wedge(&self.image(g));
                }
            }
            out = out.add(&acc);
        }
        out
    }
}

/// `θ_{-1,0} - 2θ_{1,-2}`, `θ_{1,0} - 2θ_{-1,2}` and `ω02_i - ω20_i`.
pub fn restriction_ideal() -> LinearIdeal {
    let mut gens = vec![vec![(THETA[4], one()), (THETA[2], int(-2))], vec![(THETA[1], one()), (THETA[3], int(-2))]];
    for i in 0..3 {
        gens.push(vec![(OMEGA02[i], one()), (OMEGA20[i], -one())]);
    }
    LinearIdeal::new(gens).expect("valid generators")
}

/// `θ_{1,-2}`, `θ_{-1,-2}` and `ω02_{0,-2}`.
pub fn local_symmetry_ideal() -> LinearIdeal {
    LinearIdeal::of_generators(&[THETA[2], THETA[5], OMEGA02[2]]).expect("valid generators")
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusReport {
    /// `d(g) mod I` for each generator of the ideal.
    #[serde(skip)]
    pub residuals: Vec<FormExpr>,
    /// Distinct coefficient polynomials of the residuals.
    pub conditions: Vec<String>,
    /// Dimension of the span of the conditions.
    pub rank: usize,
    #[serde(skip)]
    pub condition_polys: Vec<Poly>,
}

impl FrobeniusReport {
    pub fn closed(&self) -> bool {
        self.residuals.iter().all(FormExpr::is_zero)
    }

    /// The conditions span exactly the linear span of `expected`.
    pub fn spans(&self, expected: &[Poly]) -> bool {
        let all: Vec<Poly> = self.condition_polys.iter().chain(expected).cloned().collect();
        let r_all = poly_span_rank(&all);
        r_all == self.rank && r_all == poly_span_rank(expected)
    }
}

/// Rank of a list of polynomials as vectors over the rationals.
pub fn poly_span_rank(polys: &[Poly]) -> usize {
    let mut index: BTreeMap<Vec<(String, u32)>, usize> = BTreeMap::new();
    let keyed: Vec<Vec<(Vec<(String, u32)>, Scalar)>> = polys
        .iter()
        .map(|p| {
            p.iter()
                .map(|(e, c)| {
                    let key: Vec<(String, u32)> =
                        p.vars().iter().zip(e).filter(|(_, k)| **k > 0).map(|(v, k)| (v.clone(), *k)).collect();
                    (key, c.clone())
                })
                .collect()
        })
        .collect();
    for row in &keyed {
        for (k, _) in row {
            let n = index.len();
            index.entry(k.clone()).or_insert(n);
        }
    }
    if polys.is_empty() || index.is_empty() {
        return 0;
    }
    let mut m = QMatrix::zeros(polys.len(), index.len());
    for (i, row) in keyed.iter().enumerate() {
        for (k, c) in row {
            m.set(i, index[k], c.clone());
        }
    }
    m.rank()
}

pub fn frobenius_residual(ideal: &LinearIdeal, sys: &StructureSystem) -> FrobeniusReport {
    let residuals: Vec<FormExpr> =
        ideal.generator_forms().iter().map(|g| ideal.reduce(&sys.exterior_d(g))).collect();
    let mut seen = Vec::new();
    for r in &residuals {
        for p in r.terms().values() {
            if !seen.contains(p) {
                seen.push(p.clone());
            }
        }
    }
    FrobeniusReport {
        conditions: seen.iter().map(|p| p.to_string()).collect(),
        rank: poly_span_rank(&seen),
        residuals,
        condition_polys: seen,
    }
}

/// `2 a20_i - 3 a02_i`.
pub fn restriction_functions() -> Vec<Poly> {
    (0..3).map(|i| param(A20[i]).scale(&int(2)).sub_poly(&param(A02[i]).scale(&int(3)))).collect()
}

/// `a20 = 3/2 a02` as a substitution.
pub fn restriction_substitution() -> BTreeMap<String, Poly> {
    (0..3).map(|i| (A20[i].to_string(), param(A02[i]).scale(&ratio(3, 2)))).collect()
}

/// Coordinates of `x1 ∂u/∂x2 + y1 ∂u/∂y2` for a cubic `u` in the second
/// pair, in the weight basis of V(1,2).
pub fn gradient_form_b(u: &[Poly; 4]) -> Vec<Poly> {
    let basis = weight_basis(0, 3);
    let mut b = vec![Poly::zero(form_ctx()); 6];
    for (k, e) in basis.iter().enumerate() {
        let lifted = gradient_lift(e);
        for (mono, c) in lifted.split_by(&binforms::biform::FORM_VARS) {
            let idx = binforms::biform::basis_index(2, &mono);
            b[idx] = b[idx].add_poly(&u[k].mul_poly(&c));
        }
    }
    b
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionReport {
    /// Frobenius conditions of the restriction ideal.
    pub frobenius_rank: usize,
    pub frobenius_matches: bool,
    /// Rank of the linear conditions on `b` after imposing `a20 = 3/2 a02`.
    pub b_constraint_rank: usize,
    /// Conditions on `b` with all other parameters gone.
    pub b_conditions_pure: bool,
    /// Gradient-form `b` kills every condition.
    pub gradient_form_solves: bool,
    /// Solution space of the conditions equals the gradient-form space.
    pub gradient_form_is_solution_space: bool,
    /// Rank of the differentials of the five restriction functions at
    /// seeded generic points and at points of the restricted locus.
    pub differential_rank_generic: Vec<usize>,
    pub differential_rank_locus: Vec<usize>,
}

impl RestrictionReport {
    pub fn conditions_hold(&self) -> bool {
        self.frobenius_matches
            && self.b_constraint_rank == 2
            && self.b_conditions_pure
            && self.gradient_form_solves
            && self.gradient_form_is_solution_space
    }

    pub fn independent_generically(&self) -> bool {
        self.differential_rank_generic.iter().all(|r| *r == 5)
    }

    pub fn independent_on_locus(&self) -> bool {
        self.differential_rank_locus.iter().all(|r| *r == 5)
    }
}

/// Coefficient matrix of 1-forms against the 13 generators.
fn one_form_matrix(forms: &[FormExpr], values: &BTreeMap<String, Scalar>) -> Result<QMatrix> {
    let mut m = QMatrix::zeros(forms.len(), NGEN);
    for (i, f) in forms.iter().enumerate() {
        for (mask, p) in f.terms() {
            let g = mask.trailing_zeros() as usize;
            m.set(i, g, p.eval(values)?);
        }
    }
    Ok(m)
}

pub fn restriction_chain(seed: u64, samples: usize) -> Result<RestrictionReport> {
    let sys = StructureSystem::new(Mode::H12);
    let ideal = restriction_ideal();
    let frob = frobenius_residual(&ideal, &sys);
    let frobenius_matches = frob.rank == 3 && frob.spans(&restriction_functions());

    // differentiate 2 a20 - 3 a02 modulo the ideal on the locus
    let sub = restriction_substitution();
    let mut conditions = Vec::new();
    for f in restriction_functions() {
        let reduced = ideal.reduce(&sys.d_function(&f)).subs(&sub)?;
        conditions.extend(reduced.terms().values().cloned());
    }
    let bnames: Vec<String> = B.iter().map(|s| s.to_string()).collect();
    let (m, rhs) = linear_system(&conditions, &bnames)?;
    let b_conditions_pure = rhs.iter().all(Zero::is_zero) && m.rows() > 0;
    let b_constraint_rank = m.rank();

    let u: [Poly; 4] = std::array::from_fn(|k| Poly::variable(&format!("u{k}")));
    let grad = gradient_form_b(&u);
    let gsub: BTreeMap<String, Poly> = B.iter().map(|s| s.to_string()).zip(grad.iter().cloned()).collect();
    let gradient_form_solves = conditions.iter().all(|c| {
        let known: BTreeMap<String, Poly> =
            gsub.iter().filter(|(k, _)| c.var_index(k).is_some()).map(|(k, v)| (k.clone(), v.clone())).collect();
        c.subs(&known).map(|p| p.is_zero()).unwrap_or(false)
    });
    let kernel = m.kernel();
    let grad_cols: Vec<Vec<Scalar>> = (0..4)
        .map(|k| {
            grad.iter()
                .map(|p| p.diff(&format!("u{k}"), 1).constant_value().unwrap_or_else(Scalar::zero))
                .collect()
        })
        .collect();
    let gq = QMatrix::from_cols(&grad_cols, 6);
    let gradient_form_is_solution_space =
        kernel.len() == 4 && gq.rank() == 4 && m.mul(&gq)?.is_zero();

    // the two conditions on b as functions, and the differentials
    let (rr, pivots) = m.rref();
    let mut funcs = restriction_functions();
    for k in 0..pivots.len() {
        let mut f = Poly::zero(form_ctx());
        for (j, name) in B.iter().enumerate() {
            if !rr.get(k, j).is_zero() {
                f = f.add_poly(&param(name).scale(rr.get(k, j)));
            }
        }
        funcs.push(f);
    }
    let diffs: Vec<FormExpr> = funcs.iter().map(|f| sys.d_function(f)).collect();
    let names = crate::system::parameters();
    let mut generic = Vec::new();
    let mut locus = Vec::new();
    for s in 0..samples as u64 {
        let vals = exactalg::random::random_rational_point(&names, seed.wrapping_add(s));
        generic.push(one_form_matrix(&diffs, &vals)?.rank());
        let mut on = vals.clone();
        for i in 0..3 {
            on.insert(A20[i].to_string(), &vals[A02[i]] * ratio(3, 2));
        }
        let uvals = exactalg::random::random_scalars(4, seed.wrapping_add(1000 + s), 97);
        for (j, g) in grad.iter().enumerate() {
            let uv: BTreeMap<String, Scalar> = (0..4).map(|k| (format!("u{k}"), uvals[k].clone())).collect();
            on.insert(B[j].to_string(), g.eval(&uv)?);
        }
        locus.push(one_form_matrix(&diffs, &on)?.rank());
    }
    Ok(RestrictionReport {
        frobenius_rank: frob.rank,
        frobenius_matches,
        b_constraint_rank,
        b_conditions_pure,
        gradient_form_solves,
        gradient_form_is_solution_space,
        differential_rank_generic: generic,
        differential_rank_locus: locus,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalSymmetryReport {
    pub residual: String,
    pub expected: String,
    pub matches: bool,
}

/// `d ω02_{0,-2}` modulo the local-symmetry ideal against
/// `9 <a02, x²>_2 θ_{1,0}∧θ_{-1,0}`.
pub fn local_symmetry_obstruction(sys: &StructureSystem) -> LocalSymmetryReport {
    let ideal = local_symmetry_ideal();
    let residual = ideal.reduce(sys.gen_d(OMEGA02[2]));
    let x2sq = Poly::monomial(form_ctx(), vec![0, 0, 2, 0], one());
    let pairing = binforms::biform::pair_polys(&crate::system::a02_form(), &x2sq, 0, 2).scale(&int(9));
    let expected = FormExpr::generator(THETA[1]).wedge(&FormExpr::generator(THETA[4])).mul_fn(&pairing);
    LocalSymmetryReport {
        residual: residual.to_string(),
        expected: expected.to_string(),
        matches: residual == expected,
    }
}
