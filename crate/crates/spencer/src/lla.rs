//! Linear Lie algebras and their Spencer maps.

use crate::error::{Result, SpencerError};
use binforms::biform::{weight_basis, BiForm};
use binforms::module::{Decomposition, Module};
use binforms::{transvectant2, LieElt};
use exactalg::scalar::{int, one, zero};
use exactalg::{QMatrix, Scalar};
use num_traits::Zero;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct LinearLieAlgebra {
    pub name: String,
    n: usize,
    basis: Vec<QMatrix>,
}

fn flatten(m: &QMatrix) -> Vec<Scalar> {
    (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect()
}

fn commutator(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.mul(b).unwrap().sub(&b.mul(a).unwrap()).unwrap()
}

impl LinearLieAlgebra {
    /// Checks sizes, linear independence and closure under commutators.
    pub fn new(name: &str, basis: Vec<QMatrix>) -> Result<LinearLieAlgebra> {
        let n = basis.first().map_or(0, |m| m.rows());
        if basis.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(SpencerError::Shape);
        }
        let g = LinearLieAlgebra { name: name.to_string(), n, basis };
        if !g.basis.is_empty() {
            let span = QMatrix::from_rows(g.basis.iter().map(flatten).collect())?;
            if span.rank() != g.basis.len() {
                return Err(SpencerError::Shape);
            }
            for a in &g.basis {
                for b in &g.basis {
                    let c = flatten(&commutator(a, b));
                    let mut rows: Vec<Vec<Scalar>> = g.basis.iter().map(flatten).collect();
                    rows.push(c);
                    if QMatrix::from_rows(rows)?.rank() != g.basis.len() {
                        return Err(SpencerError::NotClosed);
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QMatrix] {
        &self.basis
    }

    pub fn gl(n: usize) -> LinearLieAlgebra {
        let mut basis = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let mut m = QMatrix::zeros(n, n);
                m.set(i, j, one());
                basis.push(m);
            }
        }
        LinearLieAlgebra::new(&format!("gl({n})"), basis).expect("gl is a Lie algebra")
    }

    pub fn so3() -> LinearLieAlgebra {
        let e = |i: usize, j: usize| {
            let mut m = QMatrix::zeros(3, 3);
            m.set(i, j, one());
            m.set(j, i, int(-1));
            m
        };
        LinearLieAlgebra::new("so(3)", vec![e(0, 1), e(0, 2), e(1, 2)]).expect("so(3) is a Lie algebra")
    }

    /// The algebra V(0,0) + V(2,0) + V(0,2) acting on V(1,k), scalar part
    /// first, then the weight bases of the two quadratic parts.
    pub fn g1k(k: u32) -> LinearLieAlgebra {
        let basis = weight_basis(1, k);
        let mut mats = Vec::new();
        let parts: Vec<(u32, u32, u32)> = vec![(0, 0, 0), (2, 0, 0), (2, 0, 1), (2, 0, 2), (0, 2, 0), (0, 2, 1), (0, 2, 2)];
        for (n, m, idx) in parts {
            let gen = if n == 2 { BiForm::basis(2, 0, idx, 0) } else if m == 2 { BiForm::basis(0, 2, 0, idx) } else { BiForm::basis(0, 0, 0, 0) };
            let mut mat = QMatrix::zeros(basis.len(), basis.len());
            for (col, b) in basis.iter().enumerate() {
                let q = BiForm::new(1, k, b.clone()).unwrap();
                let img = match (n, m) {
                    (0, 0) => q.clone(),
                    (2, 0) => transvectant2(&gen, &q, 1, 0).unwrap(),
                    _ => transvectant2(&gen, &q, 0, 1).unwrap(),
                };
                for (row, c) in img.scalar_coords().unwrap().into_iter().enumerate() {
                    mat.set(row, col, c);
                }
            }
            mats.push(mat);
        }
        LinearLieAlgebra::new(&format!("g(1,{k})"), mats).expect("closed under brackets")
    }

    /// gl(2) acting on binary forms of degree d: scalars plus the
    /// first-order pairing with quadratic forms.
    pub fn g_binary(d: u32) -> LinearLieAlgebra {
        let basis = weight_basis(d, 0);
        let mut mats = vec![QMatrix::identity(basis.len())];
        for idx in 0..3 {
            let gen = BiForm::basis(2, 0, idx, 0);
            let mut mat = QMatrix::zeros(basis.len(), basis.len());
            for (col, b) in basis.iter().enumerate() {
                let q = BiForm::new(d, 0, b.clone()).unwrap();
                let img = transvectant2(&gen, &q, 1, 0).unwrap();
                for (row, c) in img.scalar_coords().unwrap().into_iter().enumerate() {
                    mat.set(row, col, c);
                }
            }
            mats.push(mat);
        }
        LinearLieAlgebra::new(&format!("g({d})"), mats).expect("closed under brackets")
    }

    /// Number of unordered basis pairs `i < j` of the ambient space.
    pub fn pair_count(&self) -> usize {
        self.n * (self.n.saturating_sub(1)) / 2
    }

    /// Index of the pair (i, j), i < j, in lexicographic order.
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        Module::wedge_index(self.n, i, j)
    }

    /// Matrix of `Sp: V* (x) g -> L2 V* (x) V`, `Sp(a)(u, v) = a(u) v - a(v) u`.
    /// Domain index `a * dim g + b` stands for `e^a (x) g_b`; target index
    /// `pair(i, j) * n + k` for `(e^i ^ e^j) (x) e_k`.
    pub fn spencer_map(&self) -> QMatrix {
        let n = self.n;
        let dg = self.dim();
        let mut m = QMatrix::zeros(self.pair_count() * n, n * dg);
        for i in 0..n {
            for j in i + 1..n {
                let p = self.pair_index(i, j);
                for (b, g) in self.basis.iter().enumerate() {
                    for k in 0..n {
                        // a = i contributes g_b e_j, a = j contributes -g_b e_i
                        let gj = g.get(k, j);
                        if !gj.is_zero() {
                            let v = m.get(p * n + k, i * dg + b) + gj;
                            m.set(p * n + k, i * dg + b, v);
                        }
                        let gi = g.get(k, i);
                        if !gi.is_zero() {
                            let v = m.get(p * n + k, j * dg + b) - gi;
                            m.set(p * n + k, j * dg + b, v);
                        }
                    }
                }
            }
        }
        m
    }

    /// Spencer map applied to a `V -> gl(V)` map given by n matrices.
    pub fn spencer_gl(n: usize, phi: &[QMatrix]) -> Vec<Scalar> {
        let mut out = vec![zero(); n * (n.saturating_sub(1)) / 2 * n];
        for i in 0..n {
            for j in i + 1..n {
                let p = Module::wedge_index(n, i, j);
                for k in 0..n {
                    out[p * n + k] = phi[i].get(k, j) - phi[j].get(k, i);
                }
            }
        }
        out
    }

    /// The `V -> gl(V)` map of a domain vector.
    pub fn domain_to_maps(&self, v: &[Scalar]) -> Vec<QMatrix> {
        let dg = self.dim();
        (0..self.n)
            .map(|a| {
                let mut m = QMatrix::zeros(self.n, self.n);
                for (b, g) in self.basis.iter().enumerate() {
                    let c = &v[a * dg + b];
                    if !c.is_zero() {
                        m = m.sub(&g.scale(&-c.clone())).unwrap();
                    }
                }
                m
            })
            .collect()
    }

    /// Checks `Sp(X.phi) = X.Sp(phi)` for each matrix X acting on V, over
    /// every domain basis vector.
    pub fn spencer_equivariance(&self, actions: &[QMatrix]) -> bool {
        let n = self.n;
        let sp = self.spencer_map();
        for x in actions {
            for col in 0..n * self.dim() {
                let mut e = vec![zero(); n * self.dim()];
                e[col] = one();
                let phi = self.domain_to_maps(&e);
                // (X.phi)(v) = [X, phi(v)] - phi(X v)
                let moved: Vec<QMatrix> = (0..n)
                    .map(|a| {
                        let mut m = commutator(x, &phi[a]);
                        for (c, pc) in phi.iter().enumerate() {
                            let xa = x.get(c, a);
                            if !xa.is_zero() {
                                m = m.sub(&pc.scale(xa)).unwrap();
                            }
                        }
                        m
                    })
                    .collect();
                let lhs = LinearLieAlgebra::spencer_gl(n, &moved);
                let t = sp.col(col);
                let rhs = act_on_torsion(n, x, &t);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// `(X.T)(u, v) = X T(u, v) - T(X u, v) - T(u, X v)` on L2 V* (x) V.
pub fn act_on_torsion(n: usize, x: &QMatrix, t: &[Scalar]) -> Vec<Scalar> {
    let val = |i: usize, j: usize, k: usize| -> Scalar {
        if i == j {
            zero()
        } else if i < j {
            t[Module::wedge_index(n, i, j) * n + k].clone()
        } else {
            -t[Module::wedge_index(n, j, i) * n + k].clone()
        }
    };
    let mut out = vec![zero(); t.len()];
    for i in 0..n {
        for j in i + 1..n {
            let p = Module::wedge_index(n, i, j);
            for k in 0..n {
                let mut acc = zero();
                for l in 0..n {
                    acc += x.get(k, l) * val(i, j, l);
                    acc -= x.get(l, i) * val(l, j, k);
                    acc -= x.get(l, j) * val(i, l, k);
                }
                out[p * n + k] = acc;
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SpencerDims {
    pub algebra: String,
    pub dim_domain: usize,
    pub dim_target: usize,
    pub rank: usize,
    pub prolongation: usize,
    pub h02: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cokernel: Option<Decomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image: Option<Decomposition>,
}

/// Kernel and cokernel dimensions of the Spencer map; when `module` is the
/// sl2 x sl2 module structure of V (in the basis used by `g`), the image
/// and cokernel are decomposed as well.
pub fn prolongation_and_h02(g: &LinearLieAlgebra, module: Option<&Module>) -> Result<SpencerDims> {
    let sp = g.spencer_map();
    let (rank, kernel) = sp.rank_kernel();
    let (mut cokernel, mut image) = (None, None);
    if let Some(v) = module {
        let target = v.dual().wedge2().tensor(v);
        let cols: Vec<Vec<Scalar>> = (0..sp.cols()).map(|j| sp.col(j)).collect();
        let (img, _) = target.submodule(&cols)?;
        image = Some(img.decompose());
        let (q, _) = target.quotient(&cols)?;
        cokernel = Some(q.decompose());
    }
    Ok(SpencerDims {
        algebra: g.name.clone(),
        dim_domain: sp.cols(),
        dim_target: sp.rows(),
        rank,
        prolongation: kernel.len(),
        h02: sp.rows() - rank,
        cokernel,
        image,
    })
}

/// Element of the algebra on V(1,2) from its seven coordinates.
pub fn lie_elt_matrix(coords: &[Scalar]) -> Result<QMatrix> {
    let w = LieElt::from_coords(coords)?;
    let basis = weight_basis(1, 2);
    let mut m = QMatrix::zeros(6, 6);
    for (col, b) in basis.iter().enumerate() {
        let img = w.apply(&BiForm::new(1, 2, b.clone())?)?;
        for (row, c) in img.scalar_coords()?.into_iter().enumerate() {
            m.set(row, col, c);
        }
    }
    Ok(m)
}
