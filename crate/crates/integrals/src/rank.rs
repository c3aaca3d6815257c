//! Rank of the curvature-map matrix: exact symbolic upper bounds, exact
//! evaluation at seeded rational points, and the singular-locus test.

use crate::error::{IntegralError, Result};
use crate::invariants::{first_integrals, CValue};
use crate::jmatrix::{assemble_j, gradient, gradient_rows};
use crate::point::CurvaturePoint;
use excalc::system::{A02, A20};
use exactalg::scalar::{format_short, zero};
use exactalg::{Poly, PolyMatrix, Scalar};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

const MAX_ATTEMPTS: usize = 16;

/// Exact data at one point of the curvature space.
#[derive(Clone, Debug, Serialize)]
pub struct PointRank {
    pub seed: Option<u64>,
    #[serde(serialize_with = "ser_values")]
    pub point: CurvaturePoint,
    pub rank: usize,
    /// Some 2×2 minor of `(∇f1; ∇f2)` is nonzero.
    pub df_independent: bool,
    pub df_vanish: bool,
}

fn ser_values<S: serde::Serializer>(p: &CurvaturePoint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(p.values().into_iter().map(|(k, v)| (k, format_short(&v))))
}

impl PointRank {
    /// Rank 10 exactly when the differentials are independent.
    pub fn dichotomy_holds(&self) -> bool {
        (self.rank == 10) == self.df_independent
    }
}

fn eval_vec(v: &[Poly], values: &BTreeMap<String, Scalar>) -> Vec<Scalar> {
    v.iter().map(|p| p.eval(values).expect("all parameters assigned")).collect()
}

pub fn wedge_nonzero(g1: &[Scalar], g2: &[Scalar]) -> bool {
    (0..g1.len()).any(|i| (i + 1..g1.len()).any(|j| !(&g1[i] * &g2[j] - &g1[j] * &g2[i]).is_zero()))
}

/// Gradients of the two first integrals with `c` symbolic.
fn integral_gradients() -> (Vec<Poly>, Vec<Poly>) {
    let (f1, f2) = first_integrals(&CValue::Symbolic);
    (gradient(&f1), gradient(&f2))
}

pub fn rank_at(pt: &CurvaturePoint, seed: Option<u64>) -> PointRank {
    let values = pt.values();
    let rank = assemble_j(&CValue::Symbolic).matrix.eval(&values).expect("all parameters assigned").rank();
    let (g1, g2) = integral_gradients();
    let (g1, g2) = (eval_vec(&g1, &values), eval_vec(&g2, &values));
    PointRank {
        seed,
        point: pt.clone(),
        rank,
        df_independent: wedge_nonzero(&g1, &g2),
        df_vanish: g1.iter().chain(&g2).all(Zero::is_zero),
    }
}

fn point_with_c(seed: u64, c: &Scalar) -> CurvaturePoint {
    CurvaturePoint { c: c.clone(), ..CurvaturePoint::random(seed) }
}

/// Certificate that the generic rank of `J` is 10.
#[derive(Clone, Debug, Serialize)]
pub struct RankCertificate {
    pub c: String,
    /// `det J ≡ 0` on `a20 = t x1 y1, a02 = t' x2 y2` with `b` free.
    pub specialization_det_zero: bool,
    /// `J v_k ≡ 0` for the kernel vectors built from both gradients.
    pub kernel_vectors_annihilated: bool,
    /// Rank of the two kernel vectors at the certified point.
    pub kernel_rank_at_point: usize,
    pub certified: PointRank,
    pub attempts: usize,
    pub flat: PointRank,
}

impl RankCertificate {
    pub fn passed(&self) -> bool {
        self.specialization_det_zero
            && self.kernel_vectors_annihilated
            && self.kernel_rank_at_point == 2
            && self.certified.rank == 10
            && self.certified.df_independent
            && self.flat.rank < 10
            && self.flat.df_vanish
    }
}

/// `J` on the one-parameter specialization of `a20` and `a02`.
pub fn specialized_j(c: &Scalar) -> PolyMatrix {
    let zeros: BTreeMap<String, Scalar> = [A20[0], A20[2], A02[0], A02[2]].iter().map(|n| (n.to_string(), zero())).collect();
    let j = assemble_j(&CValue::Value(c.clone())).matrix;
    let entries = j.entries().iter().map(|e| e.subs_values(&zeros)).collect();
    PolyMatrix::from_entries(12, 12, entries)
}

/// Both kernel vectors, and whether `J` annihilates them identically.
pub fn kernel_vectors() -> (Vec<Vec<Poly>>, bool) {
    let j = assemble_j(&CValue::Symbolic).matrix;
    let (f1, f2) = first_integrals(&CValue::Symbolic);
    let vs: Vec<Vec<Poly>> = [f1, f2].iter().map(|f| gradient_rows(f).kernel_vector()).collect();
    let ok = vs.iter().all(|v| j.mul_vec(v).expect("12 columns").iter().all(Poly::is_zero));
    (vs, ok)
}

pub fn rank_certificate(c: &Scalar, seed: u64) -> Result<RankCertificate> {
    let specialization_det_zero = specialized_j(c).det()?.is_zero();
    let (vs, kernel_vectors_annihilated) = kernel_vectors();
    for attempt in 0..MAX_ATTEMPTS {
        let s = seed.wrapping_add(attempt as u64);
        let pt = point_with_c(s, c);
        let certified = rank_at(&pt, Some(s));
        if !certified.df_independent {
            continue;
        }
        let values = pt.values();
        let cols: Vec<Vec<Scalar>> = vs.iter().map(|v| eval_vec(v, &values)).collect();
        let kernel_rank_at_point = exactalg::QMatrix::from_cols(&cols, 12).rank();
        return Ok(RankCertificate {
            c: format_short(c),
            specialization_det_zero,
            kernel_vectors_annihilated,
            kernel_rank_at_point,
            certified,
            attempts: attempt + 1,
            flat: rank_at(&CurvaturePoint::zero(c.clone()), None),
        });
    }
    Err(IntegralError::Retries(MAX_ATTEMPTS))
}

/// Points on which the rank dichotomy is sampled: seeded random points
/// followed by members of the singular locus built by hand.
pub fn dichotomy_points(c: &Scalar, seed: u64, random: usize) -> Vec<(Option<u64>, CurvaturePoint)> {
    let mut out: Vec<(Option<u64>, CurvaturePoint)> =
        (0..random as u64).map(|k| (Some(seed + k), point_with_c(seed + k, c))).collect();
    out.push((None, CurvaturePoint::zero(c.clone())));
    out.push((None, CurvaturePoint::zero(c.clone() + Scalar::from_integer(3.into()))));
    // b alone, a alone
    let base = point_with_c(seed, c);
    let mut only_b = CurvaturePoint::zero(c.clone());
    only_b.b = base.b.clone();
    out.push((None, only_b));
    let mut only_a = base.clone();
    only_a.b = CurvaturePoint::zero(zero()).b;
    out.push((None, only_a));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyReport {
    pub samples: Vec<PointRank>,
    pub consistent: bool,
    pub singular_samples: usize,
}

pub fn rank_dichotomy(c: &Scalar, seed: u64, random: usize) -> DichotomyReport {
    let samples: Vec<PointRank> = dichotomy_points(c, seed, random).into_iter().map(|(s, p)| rank_at(&p, s)).collect();
    DichotomyReport {
        consistent: samples.iter().all(PointRank::dichotomy_holds),
        singular_samples: samples.iter().filter(|p| !p.df_independent).count(),
        samples,
    }
}

/// The triple `(c, f1, f2)` at a point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureConstants {
    pub c: String,
    pub c1: String,
    pub c2: String,
    /// The first integral vanishes, the necessary condition for the
    /// restricted reduction.
    pub restriction_admissible: bool,
}

pub fn structure_constants(pt: &CurvaturePoint) -> StructureConstants {
    let (f1, f2) = first_integrals(&CValue::Symbolic);
    let v = pt.values();
    let c1 = f1.eval(&v).expect("all parameters assigned");
    let c2 = f2.eval(&v).expect("all parameters assigned");
    StructureConstants {
        c: format_short(&pt.c),
        c1: format_short(&c1),
        c2: format_short(&c2),
        restriction_admissible: c1.is_zero(),
    }
}
