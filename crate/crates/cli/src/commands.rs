//! Bodies of the non-suite commands. Each returns its printed output and
//! whether the command's check passed; bad input is a `UsageError`.

use crate::config::CSetting;
use binforms::biform::{transvectant2, BiForm};
use binforms::grammar::{parse_expr, Expr};
use exactalg::parse::parse_poly;
use exactalg::scalar::format_short;
use integrals::{CValue, CurvaturePoint};
use serde::Serialize;
use serde_json::json;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub struct Output {
    pub text: String,
    pub passed: bool,
}

fn usage<E: std::fmt::Display>(e: E) -> UsageError {
    UsageError(e.to_string())
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn pairing_output(u: &BiForm, v: &BiForm, p1: u32, p2: u32, format: Format) -> Result<Output, UsageError> {
    let w = transvectant2(u, v, p1, p2).map_err(usage)?;
    let (n, m) = w.bidegree();
    let text = match format {
        Format::Json => pretty(&json!({"value": w.to_string(), "bidegree": [n, m]})),
        Format::Text => format!("{w}\nbidegree ({n},{m})\n"),
    };
    Ok(Output { text, passed: true })
}

/// Isotypic decomposition of `V(n,m)*...`, or the value of `T(u,v;p1,p2)`.
pub fn decompose(expr: &str, format: Format) -> Result<Output, UsageError> {
    match parse_expr(expr).map_err(usage)? {
        Expr::Pairing { u, v, p1, p2 } => pairing_output(&u, &v, p1, p2, format),
        e @ Expr::Product(_) => {
            let module = e.module().expect("products have a module");
            let d = module.decompose();
            let parts: Vec<_> = d.multiplicities().into_iter().collect();
            let text = match format {
                Format::Json => pretty(&json!({
                    "summands": parts.iter().map(|((n, m), k)| json!({"weight": [n, m], "multiplicity": k})).collect::<Vec<_>>(),
                    "dim": d.dim,
                    "accounted_dim": d.accounted_dim(),
                })),
                Format::Text => {
                    let mut s = String::new();
                    for ((n, m), k) in &parts {
                        let _ = writeln!(s, "V({n},{m}) x{k}");
                    }
                    let _ = writeln!(s, "dimension {} = {}", d.accounted_dim(), d.dim);
                    s
                }
            };
            Ok(Output { text, passed: d.is_complete() })
        }
    }
}

fn literal(text: &str) -> Result<BiForm, UsageError> {
    let p = parse_poly(text).map_err(usage)?;
    if p.is_zero() {
        return Err(UsageError(format!("`{text}`: the zero form has no bidegree")));
    }
    BiForm::infer(p).map_err(|e| UsageError(format!("`{text}`: {e}")))
}

pub fn transvect(u: &str, v: &str, p1: u32, p2: u32, format: Format) -> Result<Output, UsageError> {
    pairing_output(&literal(u)?, &literal(v)?, p1, p2, format)
}

fn c_value(c: &CSetting) -> CValue {
    match c {
        CSetting::Value(v) => CValue::Value(v.clone()),
        _ => CValue::Symbolic,
    }
}

pub fn jmatrix(c: &CSetting, format: Format) -> Output {
    let j = integrals::assemble_j(&c_value(c));
    let entries: Vec<Vec<String>> =
        (0..12).map(|i| (0..12).map(|k| j.matrix.get(i, k).to_string()).collect()).collect();
    let text = match format {
        Format::Json => pretty(&json!({"rows": j.row_labels, "cols": j.col_labels, "entries": entries})),
        Format::Text => {
            let mut s = String::new();
            for (label, row) in j.row_labels.iter().zip(&entries) {
                for (col, e) in j.col_labels.iter().zip(row) {
                    if e != "0" {
                        let _ = writeln!(s, "d{label} [{col}] = {e}");
                    }
                }
            }
            s
        }
    };
    Output { text, passed: j.contraction_mismatches(&c_value(c)).is_empty() }
}

pub fn rank(seed: u64, c: &exactalg::Scalar, format: Format) -> Result<Output, UsageError> {
    let cert = integrals::rank_certificate(c, seed).map_err(usage)?;
    let text = match format {
        Format::Json => pretty(&cert),
        Format::Text => format!(
            "rank {} at seed {:?} (c = {}), specialization det zero: {}, kernel vectors annihilated: {}, flat rank {}\n",
            cert.certified.rank,
            cert.certified.seed,
            cert.c,
            cert.specialization_det_zero,
            cert.kernel_vectors_annihilated,
            cert.flat.rank
        ),
    };
    Ok(Output { text, passed: cert.passed() })
}

pub fn integrals_cmd(c: &CSetting, check: bool, format: Format) -> Output {
    let cv = c_value(c);
    let (f1, f2) = integrals::first_integrals(&cv);
    let report = check.then(|| integrals::first_integral_identity(&cv));
    let passed = report.as_ref().map_or(true, |r| r.holds());
    let text = match format {
        Format::Json => pretty(&json!({"f1": f1.to_string(), "f2": f2.to_string(), "check": report})),
        Format::Text => {
            let mut s = format!("f1 = {f1}\nf2 = {f2}\n");
            if let Some(r) = &report {
                let _ = writeln!(s, "conserved: {}", r.holds());
            }
            s
        }
    };
    Output { text, passed }
}

pub fn constants(point_text: &str, format: Format) -> Result<Output, UsageError> {
    let pt: CurvaturePoint = integrals::point_from_json(point_text).map_err(usage)?;
    let sc = integrals::structure_constants(&pt);
    let text = match format {
        Format::Json => pretty(&sc),
        Format::Text => format!(
            "c = {}\nc1 = {}\nc2 = {}\nrestriction admissible: {}\n",
            format_short(&pt.c),
            sc.c1,
            sc.c2,
            sc.restriction_admissible
        ),
    };
    Ok(Output { text, passed: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transvectant_examples() {
        assert_eq!(transvect("x1^0*x2^2", "y2^2", 0, 2, Format::Text).unwrap().text, "2\nbidegree (0,0)\n");
        assert!(transvect("x1", "x1", 2, 0, Format::Text).is_err());
        assert!(transvect("x1+x2", "x1", 0, 0, Format::Text).is_err());
        let odd = transvect("x1*y1", "x1*y1", 1, 0, Format::Text).unwrap();
        assert!(odd.text.starts_with("0\n"));
    }

    #[test]
    fn decomposition_text() {
        let out = decompose("V(1,2)*V(1,2)", Format::Text).unwrap();
        assert_eq!(out.text.lines().count(), 7);
        assert!(out.text.ends_with("dimension 36 = 36\n"));
        assert_eq!(decompose("V(0,0)", Format::Text).unwrap().text, "V(0,0) x1\ndimension 1 = 1\n");
        assert!(decompose("V(1,", Format::Text).is_err());
    }
}
