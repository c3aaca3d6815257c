//! Linear systems read off from polynomial identities.

use crate::error::{AlgError, Result};
use crate::matrix::QMatrix;
use crate::poly::{Monomial, Poly};
use crate::scalar::Scalar;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Each polynomial must be affine in `unknowns` with coefficients that are
/// polynomials in the remaining variables. Requiring every polynomial to
/// vanish identically gives one row per (polynomial, monomial in the other
/// variables): `M u = rhs`.
pub fn linear_system(polys: &[Poly], unknowns: &[String]) -> Result<(QMatrix, Vec<Scalar>)> {
    let col: BTreeMap<&str, usize> = unknowns.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs = Vec::new();
    for p in polys {
        let uidx: Vec<Option<usize>> = p.vars().iter().map(|v| col.get(v.as_str()).copied()).collect();
        let mut grouped: BTreeMap<Monomial, (BTreeMap<usize, Scalar>, Scalar)> = BTreeMap::new();
        for (e, c) in p.iter() {
            let mut unknown = None;
            let mut rest = e.clone();
            for (i, k) in e.iter().enumerate() {
                if let (Some(u), true) = (uidx[i], *k > 0) {
                    if *k > 1 || unknown.is_some() {
                        return Err(AlgError::Dimension("polynomial is not affine in the unknowns".into()));
                    }
                    unknown = Some(u);
                    rest[i] = 0;
                }
            }
            let entry = grouped.entry(rest).or_insert_with(|| (BTreeMap::new(), Scalar::zero()));
            match unknown {
                Some(u) => *entry.0.entry(u).or_insert_with(Scalar::zero) += c,
                None => entry.1 -= c,
            }
        }
        for (_, (coeffs, r)) in grouped {
            let mut row = vec![Scalar::zero(); unknowns.len()];
            for (u, c) in coeffs {
                row[u] = c;
            }
            rows.push(row);
            rhs.push(r);
        }
    }
    if rows.is_empty() {
        return Ok((QMatrix::zeros(0, unknowns.len()), rhs));
    }
    Ok((QMatrix::from_rows(rows)?, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::scalar::int;

    #[test]
    fn affine_rows() {
        let p = parse_poly("u*x + 2*v*x - 3*x + v*y").unwrap();
        let (m, rhs) = linear_system(&[p], &["u".into(), "v".into()]).unwrap();
        assert_eq!(m.rows(), 2);
        let mut sorted = rhs.clone();
        sorted.sort();
        assert_eq!(sorted, vec![int(0), int(3)]);
        let sol = m.solve(&rhs).unwrap();
        match sol {
            crate::matrix::LinSolution::Solutions { particular, kernel } => {
                assert!(kernel.is_empty());
                assert_eq!(particular, vec![int(3), int(0)]);
            }
            _ => panic!("inconsistent"),
        }
        assert!(linear_system(&[parse_poly("u*v").unwrap()], &["u".into(), "v".into()]).is_err());
    }
}
