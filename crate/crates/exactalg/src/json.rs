//! Wire formats for `Poly` and `PolyMatrix`.

use crate::error::{AlgError, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{context, Poly};
use crate::scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

const MAX_VARS: usize = 256;
const MAX_ENTRIES: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: String,
    pub exps: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<PolyJson>>,
}

pub fn poly_to_json(p: &Poly) -> PolyJson {
    PolyJson {
        vars: p.vars().to_vec(),
        terms: p.iter().map(|(e, c)| TermJson { coeff: scalar::format(c), exps: e.clone() }).collect(),
    }
}

pub fn poly_from_json(j: &PolyJson) -> Result<Poly> {
    if j.vars.len() > MAX_VARS {
        return Err(AlgError::TooLarge(format!("{} variables", j.vars.len())));
    }
    let mut seen = BTreeSet::new();
    for v in &j.vars {
        if !is_identifier(v) {
            return Err(AlgError::Json(format!("invalid variable name `{v}`")));
        }
        if !seen.insert(v.as_str()) {
            return Err(AlgError::Json(format!("duplicate variable `{v}`")));
        }
    }
    let ctx = context(&j.vars);
    let perm: Vec<usize> = j.vars.iter().map(|v| ctx.iter().position(|w| w == v).unwrap()).collect();
    let mut exps_seen = BTreeSet::new();
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        if t.exps.len() != j.vars.len() {
            return Err(AlgError::Json(format!(
                "exponent tuple of length {} for {} variables",
                t.exps.len(),
                j.vars.len()
            )));
        }
        if !exps_seen.insert(t.exps.clone()) {
            return Err(AlgError::Json(format!("duplicate exponent tuple {:?}", t.exps)));
        }
        let c = scalar::parse(&t.coeff).map_err(|e| AlgError::Json(e.to_string()))?;
        let mut e = vec![0; ctx.len()];
        for (i, k) in t.exps.iter().enumerate() {
            e[perm[i]] = *k;
        }
        terms.push((e, c));
    }
    Ok(Poly::from_terms(&ctx, terms))
}

pub fn poly_to_string(p: &Poly) -> String {
    serde_json::to_string(&poly_to_json(p)).expect("serializable")
}

pub fn poly_from_str(text: &str) -> Result<Poly> {
    let j: PolyJson = serde_json::from_str(text).map_err(|e| AlgError::Json(e.to_string()))?;
    poly_from_json(&j)
}

pub fn matrix_to_json(m: &PolyMatrix) -> MatrixJson {
    MatrixJson {
        rows: m.rows(),
        cols: m.cols(),
        entries: (0..m.rows()).map(|i| (0..m.cols()).map(|j| poly_to_json(m.get(i, j))).collect()).collect(),
    }
}

pub fn matrix_from_json(j: &MatrixJson) -> Result<PolyMatrix> {
    if j.rows.saturating_mul(j.cols) > MAX_ENTRIES {
        return Err(AlgError::TooLarge(format!("{}x{} matrix", j.rows, j.cols)));
    }
    if j.entries.len() != j.rows || j.entries.iter().any(|r| r.len() != j.cols) {
        return Err(AlgError::Json(format!("entries do not form a {}x{} grid", j.rows, j.cols)));
    }
    let mut flat = Vec::with_capacity(j.rows * j.cols);
    for row in &j.entries {
        for e in row {
            flat.push(poly_from_json(e)?);
        }
    }
    Ok(PolyMatrix::from_entries(j.rows, j.cols, flat))
}

pub fn matrix_from_str(text: &str) -> Result<PolyMatrix> {
    let j: MatrixJson = serde_json::from_str(text).map_err(|e| AlgError::Json(e.to_string()))?;
    matrix_from_json(&j)
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s.len() <= 64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn terms_sorted_lexicographically() {
        let x = Poly::variable("x");
        let y = Poly::variable("y");
        let p = &(&y * &y) + &x.scale(&ratio(-1, 2));
        let j = poly_to_json(&p);
        assert_eq!(j.vars, ["x", "y"]);
        let exps: Vec<_> = j.terms.iter().map(|t| t.exps.clone()).collect();
        assert_eq!(exps, [vec![0, 2], vec![1, 0]]);
        assert_eq!(j.terms[1].coeff, "-1/2");
    }

    #[test]
    fn round_trip() {
        let p = crate::parse::parse_poly("3/4*x1^2*y2 - b0 + 7").unwrap();
        assert_eq!(poly_from_str(&poly_to_string(&p)).unwrap(), p);
    }

    #[test]
    fn vars_in_any_order_are_accepted() {
        let p = poly_from_str(r#"{"vars":["y","x"],"terms":[{"coeff":"2/1","exps":[1,0]}]}"#).unwrap();
        assert_eq!(p, Poly::variable("y").scale(&crate::scalar::int(2)));
    }

    #[test]
    fn malformed_inputs_rejected() {
        for bad in [
            r#"{"vars":["x"],"terms":[{"coeff":"1/0","exps":[1]}]}"#,
            r#"{"vars":["x"],"terms":[{"coeff":"1","exps":[1,2]}]}"#,
            r#"{"vars":["x","x"],"terms":[]}"#,
            r#"{"vars":["x"],"terms":[{"coeff":"1","exps":[1]},{"coeff":"2","exps":[1]}]}"#,
            r#"{"vars":["1x"],"terms":[]}"#,
        ] {
            assert!(poly_from_str(bad).is_err(), "{bad}");
        }
        assert!(matrix_from_str(r#"{"rows":1,"cols":2,"entries":[[]]}"#).is_err());
    }
}
