//! The divisibility criterion on torsion, its solution, the normal form of
//! a connection, the contact restriction identity and the vanishing of the
//! first-order obstruction map.

use crate::coords::{phi_offset, spencer_in_coords, torsion_offset, PhiCoords, TorsionCoords, TORSION_FIELDS};
use crate::error::{Result, SpencerError};
use binforms::biform::{dim, form_ctx, transvectant2, weight_basis, BiForm, X1, X2, Y1, Y2};
use binforms::seq::{gradient_lift, pr};
use exactalg::linsys::linear_system;
use exactalg::scalar::{int, one, ratio, zero};
use exactalg::{LinSolution, Poly, QMatrix, Scalar};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

fn var(name: &str) -> Poly {
    Poly::variable(name)
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionCriterion {
    pub constraint_rows: usize,
    pub constraint_rank: usize,
    pub solution_dim: usize,
    pub locus_rank: usize,
    pub stacked_rank: usize,
    pub free_block_dim: usize,
    pub free_block_unconstrained: bool,
    #[serde(skip)]
    pub constraints: QMatrix,
    #[serde(skip)]
    pub kernel: Vec<Vec<Scalar>>,
}

impl TorsionCriterion {
    /// The constraint space and the closed-form locus have the same row
    /// space, so their solution sets agree.
    pub fn equals_locus(&self) -> bool {
        self.constraint_rank == self.locus_rank && self.stacked_rank == self.constraint_rank
    }
}

/// Linear conditions on torsion coordinates defining the closed-form
/// locus: the 4-, 6-slot components vanish and s12'' = 2 s12.
pub fn locus_constraints() -> QMatrix {
    let mut rows = Vec::new();
    for name in ["s14", "s14p", "s16", "s34"] {
        for k in torsion_offset(name) {
            let mut r = vec![zero(); 90];
            r[k] = one();
            rows.push(r);
        }
    }
    for (a, b) in torsion_offset("s12pp").zip(torsion_offset("s12")) {
        let mut r = vec![zero(); 90];
        r[a] = one();
        r[b] = int(-2);
        rows.push(r);
    }
    QMatrix::from_rows(rows).expect("rectangular")
}

/// Divisible elements of V(1,2) for `r = alpha x2 + beta y2`.
fn divisible_basis() -> Vec<BiForm> {
    let r = var("alpha").mul_poly(&var(X2)).add_poly(&var("beta").mul_poly(&var(Y2)));
    let mut out = Vec::new();
    for a in [X1, Y1] {
        for b in [X2, Y2] {
            out.push(BiForm::new(1, 2, var(a).mul_poly(&r).mul_poly(&var(b))).unwrap());
        }
    }
    out
}

fn at_root(p: &Poly) -> Result<Poly> {
    let mut sub = BTreeMap::new();
    sub.insert(X2.to_string(), var("beta"));
    sub.insert(Y2.to_string(), var("alpha").neg_poly());
    let ctx = exactalg::poly::merge_ctx(p.ctx(), form_ctx());
    Ok(p.embed(&ctx)?.subs(&sub)?)
}

/// Requires `r | T(p, q)` for all linear r and all p, q divisible by r.
/// The coefficients of r stay symbolic, and every coefficient in them
/// gives one linear condition on the 90 coordinates.
pub fn torsion_criterion_solve() -> Result<TorsionCriterion> {
    let s = TorsionCoords::symbolic();
    let names = TorsionCoords::symbol_names();
    let divs = divisible_basis();
    let mut polys = Vec::new();
    for i in 0..divs.len() {
        for j in i + 1..divs.len() {
            polys.push(at_root(s.apply(&divs[i], &divs[j])?.value())?);
        }
    }
    let (m, rhs) = linear_system(&polys, &names)?;
    debug_assert!(rhs.iter().all(|c| c.is_zero()));
    let (rank, kernel) = m.rank_kernel();
    let locus = locus_constraints();
    let free: Vec<usize> = torsion_offset("s30").collect();
    let free_block_unconstrained = free.iter().all(|&c| (0..m.rows()).all(|i| m.get(i, c).is_zero()));
    Ok(TorsionCriterion {
        constraint_rows: m.rows(),
        constraint_rank: rank,
        solution_dim: kernel.len(),
        locus_rank: locus.rank(),
        stacked_rank: m.vstack(&locus)?.rank(),
        free_block_dim: free.len(),
        free_block_unconstrained,
        constraints: m,
        kernel,
    })
}

/// Rank of the constraints on a single component coming from one pair.
pub fn component_constraint_rank(component: &str, p: &BiForm, q: &BiForm) -> Result<usize> {
    let s = TorsionCoords::symbolic();
    let mut only = TorsionCoords::zero();
    let k = TORSION_FIELDS.iter().position(|(n, _)| *n == component).expect("known field");
    only.forms[k] = s.forms[k].clone();
    let names: Vec<String> = TorsionCoords::symbol_names().into_iter().filter(|n| n.starts_with(&format!("{component}_"))).collect();
    let (m, _) = linear_system(&[at_root(only.apply(p, q)?.value())?], &names)?;
    Ok(m.rank())
}

/// The element `x1 (x) r^2`, `y1 (x) r^2` pair for symbolic r.
pub fn square_pair() -> (BiForm, BiForm) {
    let r = var("alpha").mul_poly(&var(X2)).add_poly(&var("beta").mul_poly(&var(Y2)));
    let r2 = r.mul_poly(&r);
    (BiForm::new(1, 2, var(X1).mul_poly(&r2)).unwrap(), BiForm::new(1, 2, var(Y1).mul_poly(&r2)).unwrap())
}

/// Fields of phi that the normal form keeps.
pub const ADJUSTABLE: [&str; 4] = ["r12", "r32", "r12p", "r10"];

/// Finds phi with vanishing r14 and r12'' whose Spencer image is T minus
/// its s30 part. Also returns the rank of the restricted map.
pub fn intrinsic_adjustment(t: &TorsionCoords) -> Result<(PhiCoords, usize)> {
    let cols: Vec<usize> = ADJUSTABLE.iter().flat_map(|n| phi_offset(n)).collect();
    let mut images = Vec::with_capacity(cols.len());
    for &c in &cols {
        let mut e = vec![zero(); 42];
        e[c] = one();
        images.push(spencer_in_coords(&PhiCoords::from_scalars(&e)?)?.scalar_flat()?);
    }
    let a = QMatrix::from_cols(&images, 90);
    let mut rhs = t.scalar_flat()?;
    for k in torsion_offset("s30") {
        rhs[k] = zero();
    }
    let rank = a.rank();
    match a.solve(&rhs)? {
        LinSolution::Inconsistent => Err(SpencerError::Inconsistent),
        LinSolution::Solutions { particular, .. } => {
            let mut full = vec![zero(); 42];
            for (c, v) in cols.iter().zip(particular) {
                full[*c] = v;
            }
            Ok((PhiCoords::from_scalars(&full)?, rank))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContactIdentity {
    /// Nonzero coefficient polynomials when the tautological form takes
    /// values in the gradient subspace V'.
    pub restricted_nonzero: usize,
    pub restricted_pairs: usize,
    /// The same count for an unrestricted V(1,2)-valued form.
    pub full_nonzero: usize,
    pub full_pairs: usize,
}

impl ContactIdentity {
    pub fn holds(&self) -> bool {
        self.restricted_nonzero == 0
    }
}

/// `s30 = s3(x1, y1)` and `s12 = x1 (x) d s3/dx2 + y1 (x) d s3/dy2` for
/// `s3` a cubic in the second pair with coefficients `coeffs`.
pub fn cubic_lifts(coeffs: &[Poly; 4]) -> (BiForm, BiForm) {
    let mut s30 = Poly::zero(form_ctx());
    let mut u = Poly::zero(form_ctx());
    for (i, c) in coeffs.iter().enumerate() {
        let i = i as u32;
        s30 = s30.add_poly(&c.mul_poly(&var(X1).pow(3 - i).mul_poly(&var(Y1).pow(i))));
        u = u.add_poly(&c.mul_poly(&var(X2).pow(3 - i).mul_poly(&var(Y2).pow(i))));
    }
    (BiForm::new(3, 0, s30).unwrap(), BiForm::new(1, 2, gradient_lift(&u)).unwrap())
}

/// Projected torsion for each pair of frame directions; the result for the
/// pair (i, j) is the coefficient of the wedge of the i-th and j-th
/// component forms.
pub fn projected_torsion(frame: &[BiForm], s30: &BiForm, s12: &BiForm) -> Result<Vec<BiForm>> {
    let anti = |a: &BiForm, b: &BiForm, p1: u32, p2: u32| -> Result<BiForm> {
        Ok(transvectant2(a, b, p1, p2)?.sub(&transvectant2(b, a, p1, p2)?)?)
    };
    let mut out = Vec::new();
    for i in 0..frame.len() {
        for j in i + 1..frame.len() {
            let t01 = anti(&frame[i], &frame[j], 0, 1)?;
            let t10 = anti(&frame[i], &frame[j], 1, 0)?;
            let t12 = anti(&frame[i], &frame[j], 1, 2)?;
            let theta = transvectant2(s30, &t01, 2, 0)?
                .add(&transvectant2(s12, &t01, 1, 1)?.scale(&ratio(-1, 2)))?
                .add(&transvectant2(s12, &t10, 0, 2)?.scale(&ratio(2, 3)))?
                .add(&transvectant2(s12, &t12, 0, 0)?.scale(&ratio(4, 3)))?;
            out.push(pr(&theta)?);
        }
    }
    Ok(out)
}

pub fn contact_restriction_identity_for(coeffs: &[Poly; 4]) -> Result<ContactIdentity> {
    let (s30, s12) = cubic_lifts(coeffs);
    let vprime: Vec<BiForm> =
        weight_basis(0, 3).iter().map(|m| BiForm::new(1, 2, gradient_lift(m)).unwrap()).collect();
    let full: Vec<BiForm> = weight_basis(1, 2).into_iter().map(|m| BiForm::new(1, 2, m).unwrap()).collect();
    let count = |fs: &[BiForm]| -> Result<(usize, usize)> {
        let t = projected_torsion(fs, &s30, &s12)?;
        Ok((t.iter().flat_map(|f| f.coords()).filter(|c| !c.is_zero()).count(), t.len()))
    };
    let (restricted_nonzero, restricted_pairs) = count(&vprime)?;
    let (full_nonzero, full_pairs) = count(&full)?;
    Ok(ContactIdentity { restricted_nonzero, restricted_pairs, full_nonzero, full_pairs })
}

/// The identity with a fully symbolic cubic.
pub fn contact_restriction_identity() -> Result<ContactIdentity> {
    contact_restriction_identity_for(&[var("s3_0"), var("s3_1"), var("s3_2"), var("s3_3")])
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaReport {
    pub k: u32,
    pub unknowns: usize,
    pub rank: usize,
    /// Dividing by x1 after applying the map to x1^(k+1) depends only on
    /// the last coefficient of the top form.
    pub single_test_isolates_top: bool,
}

impl DeltaReport {
    pub fn vanishes(&self) -> bool {
        self.rank == self.unknowns
    }
}

/// General `delta(u) = sum_i <u, v_{2i}>_{i+1}` from V_{k+1} to V_{k-1}
/// with symbolic v_{2i}; imposes `r | delta(u)` whenever `r^2 | u` for a
/// symbolic linear r.
pub fn delta_vanishing(k: u32) -> Result<DeltaReport> {
    if k < 2 {
        return Err(SpencerError::Shape);
    }
    let mut unknowns = Vec::new();
    let mut vs = Vec::new();
    for i in 1..=k {
        let prefix = format!("v{}_", 2 * i);
        let f = BiForm::symbolic(2 * i, 0, &prefix);
        unknowns.extend((0..dim(2 * i, 0)).map(|j| format!("{prefix}{j}")));
        vs.push(f);
    }
    let delta = |u: &BiForm| -> Result<BiForm> {
        let mut acc = BiForm::zero(k - 1, 0);
        for (i, v) in vs.iter().enumerate() {
            acc = acc.add(&transvectant2(u, v, i as u32 + 2, 0)?)?;
        }
        Ok(acc)
    };
    let r = var("alpha").mul_poly(&var(X1)).add_poly(&var("beta").mul_poly(&var(Y1)));
    let mut polys = Vec::new();
    for w in weight_basis(k - 1, 0) {
        let u = BiForm::new(k + 1, 0, r.mul_poly(&r).mul_poly(&w))?;
        let d = delta(&u)?;
        let mut sub = BTreeMap::new();
        sub.insert(X1.to_string(), var("beta"));
        sub.insert(Y1.to_string(), var("alpha").neg_poly());
        let ctx = exactalg::poly::merge_ctx(d.value().ctx(), form_ctx());
        polys.push(d.value().embed(&ctx)?.subs(&sub)?);
    }
    let (m, _) = linear_system(&polys, &unknowns)?;

    // r = x1: divisibility of delta(x1^(k+1)) is the vanishing of its y1^(k-1) coefficient.
    let d = delta(&BiForm::new(k + 1, 0, var(X1).pow(k + 1))?)?;
    let top = d.value().coeff_of(&[X1, Y1], &[0, k - 1]);
    let (row, _) = linear_system(&[top], &unknowns)?;
    let last = unknowns.len() - 1;
    let single_test_isolates_top =
        row.rows() == 1 && (0..row.cols()).all(|c| (c == last) != row.get(0, c).is_zero());
    Ok(DeltaReport { k, unknowns: unknowns.len(), rank: m.rank(), single_test_isolates_top })
}
