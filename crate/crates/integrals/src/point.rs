//! Points of the curvature space `V(2,0) + V(0,2) + V(1,2)` with the
//! constant `c`.

use crate::error::{IntegralError, Result};
use binforms::biform::form_ctx;
use excalc::system::{parameters, A02, A20, B, C};
use exactalg::json::{poly_from_json, PolyJson};
use exactalg::random::random_rational_point;
use exactalg::Scalar;
use num_traits::Zero;
use std::collections::BTreeMap;

/// The 12 curvature coordinates in layout order: a20, a02, b.
pub fn coordinates() -> Vec<&'static str> {
    A20.iter().chain(&A02).chain(&B).copied().collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvaturePoint {
    pub a20: [Scalar; 3],
    pub a02: [Scalar; 3],
    pub b: [Scalar; 6],
    pub c: Scalar,
}

impl CurvaturePoint {
    pub fn zero(c: Scalar) -> CurvaturePoint {
        CurvaturePoint {
            a20: std::array::from_fn(|_| Scalar::zero()),
            a02: std::array::from_fn(|_| Scalar::zero()),
            b: std::array::from_fn(|_| Scalar::zero()),
            c,
        }
    }

    pub fn random(seed: u64) -> CurvaturePoint {
        CurvaturePoint::from_values(&random_rational_point(&parameters(), seed)).expect("all parameters present")
    }

    pub fn from_values(values: &BTreeMap<String, Scalar>) -> Result<CurvaturePoint> {
        let get = |k: &str| values.get(k).cloned().ok_or_else(|| IntegralError::Point(format!("missing `{k}`")));
        let mut pt = CurvaturePoint::zero(get(C)?);
        for i in 0..3 {
            pt.a20[i] = get(A20[i])?;
            pt.a02[i] = get(A02[i])?;
        }
        for i in 0..6 {
            pt.b[i] = get(B[i])?;
        }
        Ok(pt)
    }

    pub fn values(&self) -> BTreeMap<String, Scalar> {
        let mut out = BTreeMap::new();
        for i in 0..3 {
            out.insert(A20[i].to_string(), self.a20[i].clone());
            out.insert(A02[i].to_string(), self.a02[i].clone());
        }
        for i in 0..6 {
            out.insert(B[i].to_string(), self.b[i].clone());
        }
        out.insert(C.to_string(), self.c.clone());
        out
    }

    /// The 12 curvature coordinates, without `c`.
    pub fn vector(&self) -> Vec<Scalar> {
        self.a20.iter().chain(&self.a02).chain(&self.b).cloned().collect()
    }

    /// `pt + t v` on the 12 coordinates.
    pub fn shifted(&self, v: &[Scalar], t: &Scalar) -> CurvaturePoint {
        let mut vals = self.values();
        for (name, d) in coordinates().iter().zip(v) {
            let e = vals.get_mut(*name).expect("coordinate");
            *e = &*e + d * t;
        }
        CurvaturePoint::from_values(&vals).expect("complete")
    }

    /// Scaling by the weights `a -> t² a`, `b -> t³ b`, `c -> t⁴ c`.
    pub fn scaled(&self, t: &Scalar) -> CurvaturePoint {
        let t2 = t * t;
        let t3 = &t2 * t;
        let t4 = &t2 * &t2;
        CurvaturePoint {
            a20: self.a20.clone().map(|x| x * &t2),
            a02: self.a02.clone().map(|x| x * &t2),
            b: self.b.clone().map(|x| x * &t3),
            c: &self.c * t4,
        }
    }
}

const MAX_POINT_BYTES: usize = 1 << 20;

/// Reads a point file: a JSON object from parameter name to a constant
/// polynomial in the Poly JSON layout. Missing coordinates default to 0;
/// `c` is required.
pub fn point_from_json(text: &str) -> Result<CurvaturePoint> {
    if text.len() > MAX_POINT_BYTES {
        return Err(IntegralError::Point("file too large".into()));
    }
    let raw: BTreeMap<String, PolyJson> = serde_json::from_str(text).map_err(|e| IntegralError::Point(e.to_string()))?;
    let names = parameters();
    let mut values: BTreeMap<String, Scalar> = names.iter().map(|n| (n.to_string(), Scalar::zero())).collect();
    if !raw.contains_key(C) {
        return Err(IntegralError::Point("missing `c`".into()));
    }
    for (k, v) in raw {
        if !names.contains(&k.as_str()) {
            return Err(IntegralError::Point(format!("unknown parameter `{k}`")));
        }
        let p = poly_from_json(&v)?;
        let value = p
            .constant_value()
            .ok_or_else(|| IntegralError::Point(format!("`{k}` is not a constant")))?;
        values.insert(k, value);
    }
    CurvaturePoint::from_values(&values)
}

pub fn point_to_json(pt: &CurvaturePoint) -> String {
    let map: BTreeMap<String, PolyJson> = pt
        .values()
        .into_iter()
        .map(|(k, v)| (k, exactalg::json::poly_to_json(&exactalg::Poly::constant(form_ctx(), v))))
        .collect();
    serde_json::to_string(&map).expect("serializable")
}
