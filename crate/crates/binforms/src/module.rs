//! Concrete finite-dimensional sl2 x sl2 modules in weight bases and their
//! isotypic decomposition by highest-weight counting.

use crate::action::{act_poly, GENERATORS};
use crate::biform::{basis_index, dim, weight_basis, FORM_VARS};
use crate::error::{FormError, Result};
use exactalg::matrix::is_zero_vec;
use exactalg::scalar::{int, zero};
use exactalg::{QMatrix, Scalar};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// A module given by the matrices of e1, f1, h1, e2, f2, h2 (in the order
/// of `GENERATORS`) in a basis of joint weight vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Module {
    weights: Vec<(i64, i64)>,
    gens: Vec<QMatrix>,
}

/// One isotypic component: `multiplicity` copies of V(i, j), with the
/// highest-weight vectors that generate them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Isotypic {
    pub weight: (u32, u32),
    pub multiplicity: usize,
    #[serde(skip)]
    pub highest: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    pub components: Vec<Isotypic>,
    pub dim: usize,
}

impl Decomposition {
    /// Multiplicity map keyed by highest weight.
    pub fn multiplicities(&self) -> BTreeMap<(u32, u32), usize> {
        self.components.iter().map(|c| (c.weight, c.multiplicity)).collect()
    }

    /// Sum of multiplicity times dimension; equals the ambient dimension for
    /// a complete decomposition.
    pub fn accounted_dim(&self) -> usize {
        self.components.iter().map(|c| c.multiplicity * dim(c.weight.0, c.weight.1)).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.accounted_dim() == self.dim
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .rev()
            .map(|c| {
                let v = format!("V({},{})", c.weight.0, c.weight.1);
                if c.multiplicity == 1 {
                    v
                } else {
                    format!("{}*{}", c.multiplicity, v)
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn kron(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let mut out = QMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    let y = b.get(k, l);
                    if !y.is_zero() {
                        out.set(i * b.rows() + k, j * b.cols() + l, x * y);
                    }
                }
            }
        }
    }
    out
}

fn add(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.sub(&b.scale(&int(-1))).expect("same shape")
}

impl Module {
    /// Builds a module, reading weights off the diagonal h-matrices.
    pub fn from_generators(gens: Vec<QMatrix>) -> Result<Module> {
        if gens.len() != 6 {
            return Err(FormError::Degree(format!("{} generator matrices, expected 6", gens.len())));
        }
        let n = gens[0].rows();
        if gens.iter().any(|g| g.rows() != n || g.cols() != n) {
            return Err(FormError::Degree("generator matrices of different sizes".into()));
        }
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            for g in [2, 5] {
                for j in 0..n {
                    if i != j && !gens[g].get(i, j).is_zero() {
                        return Err(FormError::NotWeightBasis);
                    }
                }
            }
            let w = |g: usize| -> Result<i64> {
                let v = gens[g].get(i, i);
                if !v.is_integer() {
                    return Err(FormError::NotWeightBasis);
                }
                v.to_integer().try_into().map_err(|_| FormError::NotWeightBasis)
            };
            weights.push((w(2)?, w(5)?));
        }
        Ok(Module { weights, gens })
    }

    /// V(n, m) in its monomial weight basis.
    pub fn irreducible(n: u32, m: u32) -> Module {
        let basis = weight_basis(n, m);
        let gens = GENERATORS
            .iter()
            .map(|(g, s)| {
                let mut mat = QMatrix::zeros(basis.len(), basis.len());
                for (col, b) in basis.iter().enumerate() {
                    for (e, c) in act_poly(*g, *s, b).split_by(&FORM_VARS) {
                        let coeff = c.constant_value().expect("constant coefficients");
                        mat.set(basis_index(m, &e), col, coeff);
                    }
                }
                mat
            })
            .collect();
        Module::from_generators(gens).expect("monomials are weight vectors")
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[(i64, i64)] {
        &self.weights
    }

    pub fn generator(&self, k: usize) -> &QMatrix {
        &self.gens[k]
    }

    pub fn generators(&self) -> &[QMatrix] {
        &self.gens
    }

    /// Checks the bracket relations of sl2 x sl2.
    pub fn check_relations(&self) -> bool {
        let br = |a: &QMatrix, b: &QMatrix| a.mul(b).unwrap().sub(&b.mul(a).unwrap()).unwrap();
        let z = QMatrix::zeros(self.dim(), self.dim());
        for s in [0, 3] {
            let (e, f, h) = (&self.gens[s], &self.gens[s + 1], &self.gens[s + 2]);
            if br(e, f) != *h || br(h, e) != e.scale(&int(2)) || br(h, f) != f.scale(&int(-2)) {
                return false;
            }
        }
        for i in 0..3 {
            for j in 3..6 {
                if br(&self.gens[i], &self.gens[j]) != z {
                    return false;
                }
            }
        }
        true
    }

    pub fn tensor(&self, other: &Module) -> Module {
        let ia = QMatrix::identity(self.dim());
        let ib = QMatrix::identity(other.dim());
        let gens = self.gens.iter().zip(&other.gens).map(|(a, b)| add(&kron(a, &ib), &kron(&ia, b))).collect();
        let weights = self
            .weights
            .iter()
            .flat_map(|a| other.weights.iter().map(move |b| (a.0 + b.0, a.1 + b.1)))
            .collect();
        Module { weights, gens }
    }

    /// Dual module in the dual basis: X acts as -X^T.
    pub fn dual(&self) -> Module {
        Module {
            weights: self.weights.iter().map(|(a, b)| (-a, -b)).collect(),
            gens: self.gens.iter().map(|g| g.transpose().scale(&int(-1))).collect(),
        }
    }

    /// Index of `e_i ^ e_j` (i < j) in the basis of the exterior square,
    /// which lists pairs lexicographically.
    pub fn wedge_index(n: usize, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < n);
        i * n - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn wedge2(&self) -> Module {
        let n = self.dim();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let mut m = QMatrix::zeros(pairs.len(), pairs.len());
                for (col, &(i, j)) in pairs.iter().enumerate() {
                    // X(e_i ^ e_j) = X e_i ^ e_j + e_i ^ X e_j
                    for k in 0..n {
                        for (a, b, c) in [(k, j, g.get(k, i)), (i, k, g.get(k, j))] {
                            if c.is_zero() || a == b {
                                continue;
                            }
                            let (lo, hi, s) = if a < b { (a, b, c.clone()) } else { (b, a, -c.clone()) };
                            let row = Module::wedge_index(n, lo, hi);
                            let v = m.get(row, col) + s;
                            m.set(row, col, v);
                        }
                    }
                }
                m
            })
            .collect();
        let weights = pairs.iter().map(|&(i, j)| (self.weights[i].0 + self.weights[j].0, self.weights[i].1 + self.weights[j].1)).collect();
        Module { weights, gens }
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        let (a, b) = (self.dim(), other.dim());
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(x, y)| {
                let mut m = QMatrix::zeros(a + b, a + b);
                for i in 0..a {
                    for j in 0..a {
                        m.set(i, j, x.get(i, j).clone());
                    }
                }
                for i in 0..b {
                    for j in 0..b {
                        m.set(a + i, a + j, y.get(i, j).clone());
                    }
                }
                m
            })
            .collect();
        let mut weights = self.weights.clone();
        weights.extend_from_slice(&other.weights);
        Module { weights, gens }
    }

    /// The submodule spanned by `vectors`, in a weight basis obtained by
    /// projecting onto weight spaces. Returns the module and its basis in
    /// ambient coordinates. Errors if the span is not invariant.
    pub fn submodule(&self, vectors: &[Vec<Scalar>]) -> Result<(Module, Vec<Vec<Scalar>>)> {
        let n = self.dim();
        if vectors.iter().any(|v| v.len() != n) {
            return Err(FormError::Degree("vector length differs from module dimension".into()));
        }
        let mut by_weight: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (i, w) in self.weights.iter().enumerate() {
            by_weight.entry(*w).or_default().push(i);
        }
        let mut basis: Vec<Vec<Scalar>> = Vec::new();
        let mut weights = Vec::new();
        for (w, idx) in &by_weight {
            let rows: Vec<Vec<Scalar>> = vectors.iter().map(|v| idx.iter().map(|&i| v[i].clone()).collect()).collect();
            if rows.is_empty() {
                continue;
            }
            let (r, pivots) = QMatrix::from_rows(rows)?.rref();
            for k in 0..pivots.len() {
                let mut full = vec![zero(); n];
                for (jj, &i) in idx.iter().enumerate() {
                    full[i] = r.get(k, jj).clone();
                }
                basis.push(full);
                weights.push(*w);
            }
        }
        let span_rank = if vectors.is_empty() { 0 } else { QMatrix::from_rows(vectors.to_vec())?.rank() };
        if basis.len() != span_rank {
            return Err(FormError::NotPreserved);
        }
        let coords = QMatrix::from_cols(&basis, n);
        let mut gens = Vec::with_capacity(6);
        for g in &self.gens {
            let mut cols = Vec::with_capacity(basis.len());
            for v in &basis {
                let image = g.mul_vec(v)?;
                match coords.solve(&image)? {
                    exactalg::LinSolution::Solutions { particular, .. } => cols.push(particular),
                    exactalg::LinSolution::Inconsistent => return Err(FormError::NotPreserved),
                }
            }
            gens.push(QMatrix::from_cols(&cols, basis.len()));
        }
        Ok((Module { weights, gens }, basis))
    }

    /// Quotient by the submodule spanned by `vectors`. The quotient basis
    /// is the set of cosets of standard basis vectors at the non-pivot
    /// positions of the row-reduced span; their indices are returned.
    pub fn quotient(&self, vectors: &[Vec<Scalar>]) -> Result<(Module, Vec<usize>)> {
        let n = self.dim();
        let (r, pivots) = if vectors.is_empty() {
            (QMatrix::zeros(0, n), Vec::new())
        } else {
            QMatrix::from_rows(vectors.to_vec())?.rref()
        };
        let reduce = |v: &[Scalar]| -> Vec<Scalar> {
            let mut out = v.to_vec();
            for (row, &p) in pivots.iter().enumerate() {
                let c = out[p].clone();
                if c.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let rj = r.get(row, j);
                    if !rj.is_zero() {
                        out[j] -= &c * rj;
                    }
                }
            }
            out
        };
        // invariance of the span
        for g in &self.gens {
            for row in 0..pivots.len() {
                let image = g.mul_vec(r.row(row))?;
                if !is_zero_vec(&reduce(&image)) {
                    return Err(FormError::NotPreserved);
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let cols: Vec<Vec<Scalar>> = keep
                    .iter()
                    .map(|&j| {
                        let red = reduce(&g.col(j));
                        keep.iter().map(|&k| red[k].clone()).collect()
                    })
                    .collect();
                QMatrix::from_cols(&cols, keep.len())
            })
            .collect();
        let weights = keep.iter().map(|&k| self.weights[k]).collect();
        Ok((Module { weights, gens }, keep))
    }

    /// Multiplicity of V(i, j) is the dimension of the joint kernel of both
    /// raising operators on the weight-(i, j) space.
    pub fn decompose(&self) -> Decomposition {
        let mut by_weight: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (i, w) in self.weights.iter().enumerate() {
            if w.0 >= 0 && w.1 >= 0 {
                by_weight.entry(*w).or_default().push(i);
            }
        }
        let raising = self.gens[0].vstack(&self.gens[3]).expect("same width");
        let mut components = Vec::new();
        for (w, idx) in by_weight {
            let restricted = raising.select_cols(&idx);
            let kernel = restricted.kernel();
            if kernel.is_empty() {
                continue;
            }
            let highest = kernel
                .into_iter()
                .map(|k| {
                    let mut full = vec![zero(); self.dim()];
                    for (jj, &i) in idx.iter().enumerate() {
                        full[i] = k[jj].clone();
                    }
                    full
                })
                .collect::<Vec<_>>();
            components.push(Isotypic { weight: (w.0 as u32, w.1 as u32), multiplicity: highest.len(), highest });
        }
        Decomposition { components, dim: self.dim() }
    }

    /// Basis of the isotypic component generated by the highest-weight
    /// vectors of `iso`, obtained by repeatedly lowering.
    pub fn component_span(&self, iso: &Isotypic) -> Vec<Vec<Scalar>> {
        let mut out = Vec::new();
        for v in &iso.highest {
            let mut a = v.clone();
            for _ in 0..=iso.weight.0 {
                let mut b = a.clone();
                for _ in 0..=iso.weight.1 {
                    out.push(b.clone());
                    b = self.gens[4].mul_vec(&b).expect("square");
                }
                a = self.gens[1].mul_vec(&a).expect("square");
            }
        }
        out
    }
}

/// Clebsch-Gordan: V_n (x) V_m = sum over p of V_{n+m-2p}, p = 0..min(n,m).
pub fn clebsch_gordan(n: u32, m: u32) -> Vec<u32> {
    (0..=n.min(m)).map(|p| n + m - 2 * p).collect()
}

/// Two-slot Clebsch-Gordan for V(i1,i2) (x) V(j1,j2).
pub fn clebsch_gordan2(a: (u32, u32), b: (u32, u32)) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for p in clebsch_gordan(a.0, b.0) {
        for q in clebsch_gordan(a.1, b.1) {
            out.push((p, q));
        }
    }
    out
}

/// Multiplicity map of a list of summands.
pub fn multiset(parts: &[(u32, u32)]) -> BTreeMap<(u32, u32), usize> {
    let mut m = BTreeMap::new();
    for p in parts {
        *m.entry(*p).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactalg::scalar::one;

    #[test]
    fn small_tensor_products() {
        let d = Module::irreducible(1, 0).tensor(&Module::irreducible(2, 0)).decompose();
        assert_eq!(d.multiplicities(), multiset(&[(3, 0), (1, 0)]));
        let v12 = Module::irreducible(1, 2);
        let d = v12.tensor(&v12).decompose();
        assert_eq!(d.multiplicities(), multiset(&[(2, 4), (2, 2), (2, 0), (0, 4), (0, 2), (0, 0)]));
        assert!(d.is_complete());
        assert_eq!(d.dim, 36);
    }

    #[test]
    fn relations_hold() {
        assert!(Module::irreducible(2, 3).check_relations());
        let v = Module::irreducible(1, 2);
        assert!(v.dual().wedge2().tensor(&v).check_relations());
    }

    #[test]
    fn wedge_and_dual() {
        let v = Module::irreducible(1, 2);
        // exterior square of V1 (x) V2 is L2(V1) (x) S2(V2) + S2(V1) (x) L2(V2)
        let d = v.dual().wedge2().decompose();
        assert_eq!(d.multiplicities(), multiset(&[(0, 4), (0, 0), (2, 2)]));
        assert!(d.is_complete());
    }

    #[test]
    fn submodule_and_quotient() {
        let v = Module::irreducible(1, 0).tensor(&Module::irreducible(1, 0));
        // The antisymmetric line x(x)y - y(x)x spans a trivial submodule.
        let line = vec![vec![zero(), one(), -one(), zero()]];
        let (sub, _) = v.submodule(&line).unwrap();
        assert_eq!(sub.decompose().multiplicities(), multiset(&[(0, 0)]));
        let (q, keep) = v.quotient(&line).unwrap();
        assert_eq!(keep.len(), 3);
        assert_eq!(q.decompose().multiplicities(), multiset(&[(2, 0)]));
        assert!(q.check_relations());
        let not_sub = vec![vec![zero(), one(), zero(), zero()]];
        assert_eq!(v.submodule(&not_sub).unwrap_err(), FormError::NotPreserved);
        assert_eq!(v.quotient(&not_sub).unwrap_err(), FormError::NotPreserved);
    }
}
