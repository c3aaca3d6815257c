//! Dense matrices over rationals and over polynomial rings.

use crate::error::{AlgError, Result};
use crate::poly::{merge_ctx, Ctx, Poly};
use crate::scalar::{self, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Outcome of solving `M x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinSolution {
    Inconsistent,
    Solutions { particular: Vec<Scalar>, kernel: Vec<Vec<Scalar>> },
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> QMatrix {
        QMatrix { rows, cols, data: vec![scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> QMatrix {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<QMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(AlgError::Dimension("ragged rows".into()));
        }
        Ok(QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Scalar>], height: usize) -> QMatrix {
        let mut m = QMatrix::zeros(height, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), height);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|v| scalar::int(*v)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(AlgError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(AlgError::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn sub(&self, other: &QMatrix) -> Result<QMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(AlgError::Dimension("shape mismatch".into()));
        }
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn vstack(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(AlgError::Dimension("column counts differ".into()));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(QMatrix { rows: self.rows + other.rows, cols, data })
    }

    pub fn hstack(&self, other: &QMatrix) -> Result<QMatrix> {
        Ok(self.transpose().vstack(&other.transpose())?.transpose())
    }

    pub fn select_cols(&self, cols: &[usize]) -> QMatrix {
        let mut m = QMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, j) in cols.iter().enumerate() {
                m.set(i, jj, self.get(i, *j).clone());
            }
        }
        m
    }

    /// Rows rescaled to primitive integer vectors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut rows = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let r = self.row(i);
            let l = r.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            rows.push(r.iter().map(|v| v.numer() * (&l / v.denom())).collect());
            scales.push(l);
        }
        (rows, scales)
    }

    /// Fraction-free (Bareiss) forward elimination. Returns the pivot
    /// columns; the rank is their count.
    pub fn bareiss_pivots(&self) -> Vec<usize> {
        let (mut a, _) = self.integer_rows();
        bareiss(&mut a, self.cols).0
    }

    pub fn rank(&self) -> usize {
        self.bareiss_pivots().len()
    }

    /// Reduced row echelon form over the rationals with its pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = scalar::one() / m.get(r, c);
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let sub = m.get(r, j) * &f;
                    if !sub.is_zero() {
                        let v = m.get(i, j) - sub;
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![scalar::zero(); self.cols];
                v[f] = scalar::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    /// Exact rank (fraction-free) together with a kernel basis.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<Scalar>>) {
        let rank = self.rank();
        let kernel = self.kernel();
        debug_assert_eq!(rank + kernel.len(), self.cols);
        (rank, kernel)
    }

    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(AlgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        if self.rows == 0 {
            return Ok(scalar::one());
        }
        let (mut a, scales) = self.integer_rows();
        let (pivots, sign, last) = bareiss(&mut a, self.cols);
        if pivots.len() < self.rows {
            return Ok(scalar::zero());
        }
        let denom = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
        Ok(BigRational::new(last * sign, denom))
    }

    pub fn solve(&self, rhs: &[Scalar]) -> Result<LinSolution> {
        if rhs.len() != self.rows {
            return Err(AlgError::Dimension(format!("rhs of length {} for {} rows", rhs.len(), self.rows)));
        }
        let aug = self.hstack(&QMatrix::from_cols(&[rhs.to_vec()], self.rows))?;
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(LinSolution::Inconsistent);
        }
        let mut particular = vec![scalar::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            particular[p] = r.get(row, self.cols).clone();
        }
        Ok(LinSolution::Solutions { particular, kernel: self.kernel() })
    }

    /// Inverse of a square nonsingular matrix.
    pub fn inverse(&self) -> Result<QMatrix> {
        if self.rows != self.cols {
            return Err(AlgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let aug = self.hstack(&QMatrix::identity(self.rows))?;
        let (r, pivots) = aug.rref();
        if pivots.iter().take(self.rows).copied().ne(0..self.rows) {
            return Err(AlgError::Dimension("singular matrix".into()));
        }
        let cols: Vec<usize> = (self.cols..2 * self.cols).collect();
        Ok(r.select_cols(&cols))
    }

    pub fn to_poly_matrix(&self, ctx: &Ctx) -> PolyMatrix {
        PolyMatrix::from_entries(
            self.rows,
            self.cols,
            self.data.iter().map(|v| Poly::constant(ctx, v.clone())).collect(),
        )
    }
}

/// Bareiss elimination in place on integer rows. Returns pivot columns,
/// the sign of the row permutation, and the last pivot (the determinant
/// of the leading pivot minor).
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> (Vec<usize>, BigInt, BigInt) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (pivots, sign, prev)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Poly>) -> PolyMatrix {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        PolyMatrix { rows, cols, entries }.unified()
    }

    pub fn zeros(ctx: &Ctx, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { rows, cols, entries: vec![Poly::zero(ctx); rows * cols] }
    }

    /// Re-embeds all entries into one merged context.
    fn unified(mut self) -> PolyMatrix {
        if let Some(first) = self.entries.first() {
            let mut ctx = first.ctx().clone();
            for e in &self.entries {
                ctx = merge_ctx(&ctx, e.ctx());
            }
            for e in &mut self.entries {
                *e = e.embed(&ctx).expect("merged context");
            }
        }
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        let ctx = merge_ctx(self.entries[0].ctx(), p.ctx());
        self.entries[i * self.cols + j] = p;
        let entries = std::mem::take(&mut self.entries);
        self.entries = entries.into_iter().map(|e| e.embed(&ctx).expect("merged context")).collect();
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn to_constant(&self) -> Result<QMatrix> {
        let data = self.entries.iter().map(|e| e.constant_value().ok_or(AlgError::NotConstant)).collect::<Result<_>>()?;
        Ok(QMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn eval(&self, values: &BTreeMap<String, Scalar>) -> Result<QMatrix> {
        let data = self.entries.iter().map(|e| e.eval(values)).collect::<Result<_>>()?;
        Ok(QMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn subs(&self, assignment: &BTreeMap<String, Poly>) -> Result<PolyMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let relevant: BTreeMap<String, Poly> = assignment
                    .iter()
                    .filter(|(k, _)| e.var_index(k).is_some())
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                e.subs(&relevant)
            })
            .collect::<Result<_>>()?;
        Ok(PolyMatrix::from_entries(self.rows, self.cols, entries))
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        if v.len() != self.cols {
            return Err(AlgError::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(self.get(i, 0).ctx());
                for (j, vj) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !vj.is_zero() {
                        acc = acc.add_poly(&a.mul_poly(vj));
                    }
                }
                acc
            })
            .collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination with exact
    /// polynomial division.
    pub fn det(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(AlgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Err(AlgError::Dimension("empty matrix".into()));
        }
        let ctx = self.entries[0].ctx().clone();
        let mut a: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut prev = Poly::one(&ctx);
        let mut negate = false;
        for k in 0..n {
            let p = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| a[i][k].len());
            let Some(p) = p else { return Ok(Poly::zero(&ctx)) };
            if p != k {
                a.swap(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[k][k].mul_poly(&a[i][j]).sub_poly(&a[i][k].mul_poly(&a[k][j]));
                    a[i][j] = num.div_exact(&prev)?;
                }
                a[i][k] = Poly::zero(&ctx);
            }
            prev = a[k][k].clone();
        }
        Ok(if negate { prev.neg_poly() } else { prev })
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(scalar::format_short).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn max_abs(v: &[Scalar]) -> Scalar {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(scalar::zero)
}
