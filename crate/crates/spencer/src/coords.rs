//! Coordinates on `V(1,2)* (x) g` and on `L2 V(1,2)* (x) V(1,2)` by
//! pairings with auxiliary forms, and the Spencer map in these
//! coordinates.

use crate::error::{Result, SpencerError};
use crate::lla::LinearLieAlgebra;
use binforms::biform::{dim, form_ctx, weight_basis, BiForm};
use binforms::{transvectant2, LieElt};
use exactalg::scalar::{ratio, zero};
use exactalg::{Poly, QMatrix, Scalar};
use serde::Serialize;
use std::sync::OnceLock;

/// Names and bidegrees of the ten torsion components, in canonical order.
pub const TORSION_FIELDS: [(&str, (u32, u32)); 10] = [
    ("s12", (1, 2)),
    ("s14", (1, 4)),
    ("s16", (1, 6)),
    ("s10", (1, 0)),
    ("s12p", (1, 2)),
    ("s14p", (1, 4)),
    ("s30", (3, 0)),
    ("s32", (3, 2)),
    ("s34", (3, 4)),
    ("s12pp", (1, 2)),
];

/// Names and bidegrees of the six components of a map V(1,2) -> g.
pub const PHI_FIELDS: [(&str, (u32, u32)); 6] = [
    ("r12", (1, 2)),
    ("r32", (3, 2)),
    ("r12p", (1, 2)),
    ("r14", (1, 4)),
    ("r12pp", (1, 2)),
    ("r10", (1, 0)),
];

fn offsets(fields: &[(&str, (u32, u32))]) -> Vec<usize> {
    let mut out = vec![0];
    for (_, (n, m)) in fields {
        out.push(out.last().unwrap() + dim(*n, *m));
    }
    out
}

pub fn torsion_offset(name: &str) -> std::ops::Range<usize> {
    let off = offsets(&TORSION_FIELDS);
    let k = TORSION_FIELDS.iter().position(|(n, _)| *n == name).expect("known field");
    off[k]..off[k + 1]
}

pub fn phi_offset(name: &str) -> std::ops::Range<usize> {
    let off = offsets(&PHI_FIELDS);
    let k = PHI_FIELDS.iter().position(|(n, _)| *n == name).expect("known field");
    off[k]..off[k + 1]
}

fn split(fields: &[(&str, (u32, u32))], flat: &[Poly]) -> Result<Vec<BiForm>> {
    let off = offsets(fields);
    fields
        .iter()
        .enumerate()
        .map(|(k, (_, (n, m)))| Ok(BiForm::from_coords(*n, *m, &flat[off[k]..off[k + 1]])?))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiCoords {
    #[serde(skip)]
    pub forms: Vec<BiForm>,
}

impl PhiCoords {
    pub fn from_flat(flat: &[Poly]) -> Result<PhiCoords> {
        Ok(PhiCoords { forms: split(&PHI_FIELDS, flat)? })
    }

    pub fn from_scalars(flat: &[Scalar]) -> Result<PhiCoords> {
        PhiCoords::from_flat(&flat.iter().map(|c| Poly::constant(form_ctx(), c.clone())).collect::<Vec<_>>())
    }

    /// Generic element with one variable per coordinate, `{field}_{k}`.
    pub fn symbolic() -> PhiCoords {
        PhiCoords {
            forms: PHI_FIELDS.iter().map(|(name, (n, m))| BiForm::symbolic(*n, *m, &format!("{name}_"))).collect(),
        }
    }

    pub fn get(&self, name: &str) -> &BiForm {
        &self.forms[PHI_FIELDS.iter().position(|(n, _)| *n == name).expect("known field")]
    }

    pub fn flat(&self) -> Vec<Poly> {
        self.forms.iter().flat_map(|f| f.coords()).collect()
    }

    /// `phi(p) = <r12,p>_{1,2} + (<r32,p>_{1,2} + <r12',p>_{0,2})
    ///  + (<r14,p>_{1,2} + <r12'',p>_{1,1} + <r10,p>_{1,0})`.
    pub fn apply(&self, p: &BiForm) -> Result<LieElt> {
        let t = |name: &str, a: u32, b: u32| transvectant2(self.get(name), p, a, b);
        Ok(LieElt::new(
            t("r12", 1, 2)?,
            t("r32", 1, 2)?.add(&t("r12p", 0, 2)?)?,
            t("r14", 1, 2)?.add(&t("r12pp", 1, 1)?)?.add(&t("r10", 1, 0)?)?,
        )?)
    }

    /// Coordinates in `V* (x) g` for the algebra basis of
    /// `LinearLieAlgebra::g1k(2)`: index `a * 7 + b`.
    pub fn encode(&self) -> Result<Vec<Poly>> {
        let mut out = Vec::with_capacity(42);
        for b in weight_basis(1, 2) {
            let w = self.apply(&BiForm::new(1, 2, b)?)?;
            out.extend(w.p00.coords());
            out.extend(w.p20.coords());
            out.extend(w.p02.coords());
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionCoords {
    pub forms: Vec<BiForm>,
}

impl TorsionCoords {
    pub fn zero() -> TorsionCoords {
        TorsionCoords { forms: TORSION_FIELDS.iter().map(|(_, (n, m))| BiForm::zero(*n, *m)).collect() }
    }

    pub fn from_flat(flat: &[Poly]) -> Result<TorsionCoords> {
        Ok(TorsionCoords { forms: split(&TORSION_FIELDS, flat)? })
    }

    pub fn from_scalars(flat: &[Scalar]) -> Result<TorsionCoords> {
        TorsionCoords::from_flat(&flat.iter().map(|c| Poly::constant(form_ctx(), c.clone())).collect::<Vec<_>>())
    }

    /// Generic element with one variable per coordinate, `{field}_{k}`.
    pub fn symbolic() -> TorsionCoords {
        TorsionCoords {
            forms: TORSION_FIELDS.iter().map(|(name, (n, m))| BiForm::symbolic(*n, *m, &format!("{name}_"))).collect(),
        }
    }

    /// Variable names of `symbolic()`, in flat order.
    pub fn symbol_names() -> Vec<String> {
        TORSION_FIELDS
            .iter()
            .flat_map(|(name, (n, m))| (0..dim(*n, *m)).map(move |k| format!("{name}_{k}")))
            .collect()
    }

    pub fn get(&self, name: &str) -> &BiForm {
        &self.forms[TORSION_FIELDS.iter().position(|(n, _)| *n == name).expect("known field")]
    }

    pub fn flat(&self) -> Vec<Poly> {
        self.forms.iter().flat_map(|f| f.coords()).collect()
    }

    pub fn scalar_flat(&self) -> Result<Vec<Scalar>> {
        let mut out = Vec::new();
        for f in &self.forms {
            out.extend(f.scalar_coords()?);
        }
        Ok(out)
    }

    /// `T(p, q)` from the pairings `a = <p,q>_{1,0}`, `b = <p,q>_{0,1}` and
    /// `c = <p,q>_{1,2}`.
    pub fn apply(&self, p: &BiForm, q: &BiForm) -> Result<BiForm> {
        let a = transvectant2(p, q, 1, 0)?;
        let b = transvectant2(p, q, 0, 1)?;
        let c = transvectant2(p, q, 1, 2)?;
        let terms: [(&str, &BiForm, u32, u32); 10] = [
            ("s12", &a, 0, 2),
            ("s14", &a, 0, 3),
            ("s16", &a, 0, 4),
            ("s10", &b, 1, 0),
            ("s12p", &b, 1, 1),
            ("s14p", &b, 1, 2),
            ("s30", &b, 2, 0),
            ("s32", &b, 2, 1),
            ("s34", &b, 2, 2),
            ("s12pp", &c, 0, 0),
        ];
        let mut out = BiForm::zero(1, 2);
        for (name, x, i, j) in terms {
            let s = self.get(name);
            if !s.is_zero() {
                out = out.add(&transvectant2(s, x, i, j)?)?;
            }
        }
        Ok(out)
    }

    /// Coordinates in `L2 V* (x) V`: index `pair(i, j) * 6 + k`.
    pub fn encode(&self) -> Result<Vec<Poly>> {
        let basis: Vec<BiForm> = weight_basis(1, 2).into_iter().map(|b| BiForm::new(1, 2, b).unwrap()).collect();
        let mut out = Vec::with_capacity(90);
        for i in 0..6 {
            for j in i + 1..6 {
                out.extend(self.apply(&basis[i], &basis[j])?.coords());
            }
        }
        Ok(out)
    }
}

/// Matrix of `encode` on the 90 torsion coordinates and its inverse.
pub fn torsion_change_of_basis() -> &'static (QMatrix, QMatrix) {
    static CELL: OnceLock<(QMatrix, QMatrix)> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut cols = Vec::with_capacity(90);
        for k in 0..90 {
            let mut e = vec![zero(); 90];
            e[k] = exactalg::scalar::one();
            let t = TorsionCoords::from_scalars(&e).unwrap();
            cols.push(t.encode().unwrap().iter().map(|p| p.constant_value().unwrap_or_else(zero)).collect());
        }
        let m = QMatrix::from_cols(&cols, 90);
        let inv = m.inverse().expect("torsion coordinates form a basis");
        (m, inv)
    })
}

fn apply_constant(m: &QMatrix, v: &[Poly]) -> Vec<Poly> {
    (0..m.rows())
        .map(|i| {
            let mut acc = Poly::zero(form_ctx());
            for (j, vj) in v.iter().enumerate() {
                acc.add_assign_scaled(vj, m.get(i, j));
            }
            acc
        })
        .collect()
}

/// Inverse of `TorsionCoords::encode`.
pub fn decode_t(v: &[Poly]) -> Result<TorsionCoords> {
    if v.len() != 90 {
        return Err(SpencerError::Shape);
    }
    TorsionCoords::from_flat(&apply_constant(&torsion_change_of_basis().1, v))
}

/// Decodes a full trilinear array `t[(i * 6 + j) * 6 + k] = T(e_i, e_j)_k`,
/// rejecting arrays that are not alternating in (i, j).
pub fn decode_t_full(t: &[Poly]) -> Result<TorsionCoords> {
    if t.len() != 216 {
        return Err(SpencerError::Shape);
    }
    let mut v = Vec::with_capacity(90);
    for i in 0..6 {
        for k in 0..6 {
            if !t[(i * 6 + i) * 6 + k].is_zero() {
                return Err(SpencerError::NotAlternating);
            }
        }
        for j in i + 1..6 {
            for k in 0..6 {
                let a = &t[(i * 6 + j) * 6 + k];
                let b = &t[(j * 6 + i) * 6 + k];
                if !a.add_poly(b).is_zero() {
                    return Err(SpencerError::NotAlternating);
                }
                v.push(a.clone());
            }
        }
    }
    decode_t(&v)
}

/// The Spencer map followed by `decode_t`.
pub fn spencer_in_coords(phi: &PhiCoords) -> Result<TorsionCoords> {
    let sp = LinearLieAlgebra::g1k(2).spencer_map();
    decode_t(&apply_constant(&sp, &phi.encode()?))
}

/// Coefficients of the closed-form answer, as rationals multiplying the
/// (r12, r12', r12'') triple or a single field.
#[derive(Clone, Debug)]
pub struct SpencerFormula {
    pub s12: [Scalar; 3],
    pub s14: Scalar,
    pub s10: Scalar,
    pub s12p: [Scalar; 3],
    pub s14p: Scalar,
    pub s32: Scalar,
    pub s12pp: [Scalar; 3],
}

impl Default for SpencerFormula {
    fn default() -> Self {
        let r = ratio;
        SpencerFormula {
            s12: [r(-1, 6), r(3, 6), r(-4, 6)],
            s14: r(-1, 2),
            s10: r(1, 1),
            s12p: [r(-1, 8), r(-1, 8), r(4, 8)],
            s14p: r(-1, 2),
            s32: r(-1, 4),
            s12pp: [r(-1, 3), r(3, 3), r(8, 3)],
        }
    }
}

impl SpencerFormula {
    /// Torsion coordinates predicted from phi's coordinates.
    pub fn evaluate(&self, phi: &PhiCoords) -> Result<TorsionCoords> {
        let comb = |c: &[Scalar; 3]| -> Result<BiForm> {
            Ok(phi.get("r12").scale(&c[0]).add(&phi.get("r12p").scale(&c[1]))?.add(&phi.get("r12pp").scale(&c[2]))?)
        };
        Ok(TorsionCoords {
            forms: vec![
                comb(&self.s12)?,
                phi.get("r14").scale(&self.s14),
                BiForm::zero(1, 6),
                phi.get("r10").scale(&self.s10),
                comb(&self.s12p)?,
                phi.get("r14").scale(&self.s14p),
                BiForm::zero(3, 0),
                phi.get("r32").scale(&self.s32),
                BiForm::zero(3, 4),
                comb(&self.s12pp)?,
            ],
        })
    }
}

/// Per-component comparison of the computed and predicted coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct FormulaCheck {
    pub matches: Vec<(String, bool)>,
    pub variables: usize,
}

impl FormulaCheck {
    pub fn passed(&self) -> bool {
        self.matches.iter().all(|(_, ok)| *ok)
    }
}

pub fn check_spencer_formula(phi: &PhiCoords, formula: &SpencerFormula) -> Result<FormulaCheck> {
    let got = spencer_in_coords(phi)?;
    let want = formula.evaluate(phi)?;
    let matches = TORSION_FIELDS
        .iter()
        .zip(got.forms.iter().zip(&want.forms))
        .map(|((name, _), (a, b))| (name.to_string(), a.value() == b.value()))
        .collect();
    let variables = phi.flat().iter().flat_map(|p| p.used_vars()).collect::<std::collections::BTreeSet<_>>().len();
    Ok(FormulaCheck { matches, variables })
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactalg::random::random_scalars;
    use exactalg::scalar::int;

    #[test]
    fn encode_is_a_bijection() {
        let (m, _) = torsion_change_of_basis();
        assert_eq!(m.rank(), 90);
        let s = TorsionCoords::from_scalars(&random_scalars(90, 3, 20)).unwrap();
        assert_eq!(decode_t(&s.encode().unwrap()).unwrap(), s);
        assert_eq!(decode_t(&vec![Poly::zero(form_ctx()); 90]).unwrap().scalar_flat().unwrap(), vec![int(0); 90]);
    }

    #[test]
    fn only_r32() {
        let mut v = vec![zero(); 42];
        for k in phi_offset("r32") {
            v[k] = int(k as i64);
        }
        let phi = PhiCoords::from_scalars(&v).unwrap();
        let t = spencer_in_coords(&phi).unwrap();
        for (k, (name, _)) in TORSION_FIELDS.iter().enumerate() {
            if *name == "s32" {
                assert_eq!(t.forms[k], phi.get("r32").scale(&ratio(-1, 4)));
            } else {
                assert!(t.forms[k].is_zero(), "{name}");
            }
        }
    }

    #[test]
    fn not_alternating_rejected() {
        let mut t = vec![Poly::zero(form_ctx()); 216];
        t[(6 + 2) * 6] = Poly::one(form_ctx());
        assert_eq!(decode_t_full(&t).unwrap_err(), SpencerError::NotAlternating);
    }
}
