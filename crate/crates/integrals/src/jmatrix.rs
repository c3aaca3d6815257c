//! The 12×12 matrix of the curvature map against the coframe, gradients of
//! functions on the curvature space, and the kernel vectors they induce.

use crate::invariants::CValue;
use crate::point::coordinates;
use binforms::biform::{form_ctx, pair_polys, weight_basis};
use excalc::form::{bit, label, FormExpr, NGEN, OMEGA02, OMEGA20, THETA};
use excalc::system::system_ctx;
use excalc::{Mode, StructureSystem, VectorField};
use exactalg::scalar::{int, one};
use exactalg::{Poly, PolyMatrix, QMatrix};
use num_traits::Zero;
use serde::Serialize;
use std::sync::OnceLock;

/// Coframe generators indexing the columns: the six θ components, then
/// the V(0,2) and V(2,0) connection components. The scalar connection
/// component is absent in the unimodular reduction.
pub const COLUMNS: [usize; 12] = [0, 1, 2, 3, 4, 5, 7, 8, 9, 10, 11, 12];

pub fn h12() -> &'static StructureSystem {
    static SYS: OnceLock<StructureSystem> = OnceLock::new();
    SYS.get_or_init(|| StructureSystem::new(Mode::H12))
}

#[derive(Clone, Debug)]
pub struct JMatrix {
    pub matrix: PolyMatrix,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

/// `J[i][j]` is the coefficient of `e_{COLUMNS[j]}` in `d` of the `i`-th
/// curvature coordinate.
pub fn assemble_j(c: &CValue) -> JMatrix {
    let sys = h12();
    let mut entries = Vec::with_capacity(144);
    for name in coordinates() {
        let d = sys.par_d(name);
        for g in COLUMNS {
            let e = d.coefficient(bit(g)).cloned().unwrap_or_else(|| Poly::zero(system_ctx()));
            entries.push(c.apply(&e));
        }
    }
    JMatrix {
        matrix: PolyMatrix::from_entries(12, 12, entries),
        row_labels: coordinates().iter().map(|s| s.to_string()).collect(),
        col_labels: COLUMNS.iter().map(|g| label(*g).to_string()).collect(),
    }
}

impl JMatrix {
    /// `Σ_j J[i][j] e_{COLUMNS[j]}` for row `i`.
    pub fn row_form(&self, i: usize) -> FormExpr {
        let mut out = FormExpr::zero();
        for (j, g) in COLUMNS.iter().enumerate() {
            out.add_term(bit(*g), self.matrix.get(i, j), &one());
        }
        out
    }

    /// Rows whose contraction with the coframe differs from the
    /// differential of the coordinate (empty when `dK = J (θ+ω)`).
    pub fn contraction_mismatches(&self, c: &CValue) -> Vec<String> {
        let sys = h12();
        coordinates()
            .iter()
            .enumerate()
            .filter(|(i, name)| self.row_form(*i) != sys.par_d(name).map_coeffs(|p| c.apply(p)))
            .map(|(_, name)| name.to_string())
            .collect()
    }

    /// `∇f · J`, the coframe coefficients of `d(f ∘ K)`.
    pub fn conservation_residual(&self, f: &Poly) -> Vec<Poly> {
        let g = gradient(f);
        (0..12)
            .map(|j| {
                let mut acc = Poly::zero(system_ctx());
                for (i, gi) in g.iter().enumerate() {
                    let e = self.matrix.get(i, j);
                    if !gi.is_zero() && !e.is_zero() {
                        acc.add_assign_scaled(&gi.mul_poly(e), &one());
                    }
                }
                acc
            })
            .collect()
    }
}

/// Gradient in the 12 curvature coordinates.
pub fn gradient(f: &Poly) -> Vec<Poly> {
    coordinates().iter().map(|n| f.diff(n, 1)).collect()
}

/// `P[k][i] = <W_k, W_i>_{p1,p2}` on the weight basis of V(n,m).
pub fn pairing_matrix(n: u32, m: u32, p1: u32, p2: u32) -> QMatrix {
    let basis = weight_basis(n, m);
    let rows = basis
        .iter()
        .map(|u| basis.iter().map(|v| pair_polys(u, v, p1, p2).constant_value().expect("full contraction")).collect())
        .collect();
    QMatrix::from_rows(rows).expect("square")
}

/// Components of the three vectors `r20, r02, r12` with
/// `df = 1/6 <r20, da20>_{2,0} + 1/2 <r02, da02>_{0,2} + 1/2 <r12, db>_{1,2}`.
#[derive(Clone, Debug, Serialize)]
pub struct GradientRows {
    #[serde(serialize_with = "ser_polys")]
    pub r20: Vec<Poly>,
    #[serde(serialize_with = "ser_polys")]
    pub r02: Vec<Poly>,
    #[serde(serialize_with = "ser_polys")]
    pub r12: Vec<Poly>,
}

fn ser_polys<S: serde::Serializer>(v: &[Poly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

/// Solves `Σ_k r_k P[k][i] = factor · g_i` for `r`.
fn solve_rows(g: &[Poly], table: &QMatrix, factor: i64) -> Vec<Poly> {
    let inv = table.transpose().inverse().expect("nondegenerate pairing");
    (0..g.len())
        .map(|k| {
            let mut acc = Poly::zero(system_ctx());
            for (i, gi) in g.iter().enumerate() {
                let q = inv.get(k, i);
                if !q.is_zero() {
                    acc.add_assign_scaled(gi, &(q * int(factor)));
                }
            }
            acc
        })
        .collect()
}

pub fn gradient_rows(f: &Poly) -> GradientRows {
    let g = gradient(f);
    GradientRows {
        r20: solve_rows(&g[0..3], &pairing_matrix(2, 0, 2, 0), 6),
        r02: solve_rows(&g[3..6], &pairing_matrix(0, 2, 0, 2), 2),
        r12: solve_rows(&g[6..12], &pairing_matrix(1, 2, 1, 2), 2),
    }
}

impl GradientRows {
    /// The gradient recovered from the defining equation, for
    /// cross-checking against direct differentiation.
    pub fn gradient(&self) -> Vec<Poly> {
        let back = |r: &[Poly], table: QMatrix, scale: (i64, i64)| -> Vec<Poly> {
            (0..r.len())
                .map(|i| {
                    let mut acc = Poly::zero(system_ctx());
                    for (k, rk) in r.iter().enumerate() {
                        acc.add_assign_scaled(rk, &(table.get(k, i) * int(scale.0) / int(scale.1)));
                    }
                    acc
                })
                .collect()
        };
        let mut out = back(&self.r20, pairing_matrix(2, 0, 2, 0), (1, 6));
        out.extend(back(&self.r02, pairing_matrix(0, 2, 0, 2), (1, 2)));
        out.extend(back(&self.r12, pairing_matrix(1, 2, 1, 2), (1, 2)));
        out
    }

    /// Column vector in `COLUMNS` order annihilated by `J`:
    /// `-r12` on θ, `r02` on the V(0,2) and `r20` on the V(2,0) block.
    pub fn kernel_vector(&self) -> Vec<Poly> {
        self.r12.iter().map(Poly::neg_poly).chain(self.r02.iter().cloned()).chain(self.r20.iter().cloned()).collect()
    }

    /// The vector field with the kernel vector as its coframe contractions.
    pub fn vector_field(&self) -> VectorField {
        let mut c = vec![Poly::zero(form_ctx()); NGEN];
        for i in 0..6 {
            c[THETA[i]] = self.r12[i].neg_poly();
        }
        for i in 0..3 {
            c[OMEGA02[i]] = self.r02[i].clone();
            c[OMEGA20[i]] = self.r20[i].clone();
        }
        VectorField::new(c).expect("13 contractions")
    }

    pub fn is_zero(&self) -> bool {
        self.r20.iter().chain(&self.r02).chain(&self.r12).all(Poly::is_zero)
    }
}
