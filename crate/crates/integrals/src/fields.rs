//! The two vector fields dual to the first integrals and their action on
//! the coframe.

use crate::invariants::{first_integrals, CValue};
use crate::jmatrix::{gradient_rows, h12, COLUMNS};
use excalc::symmetry::{symmetry_fields_check, SymmetryReport};
use excalc::VectorField;

pub fn symmetry_fields() -> (VectorField, VectorField) {
    let (f1, f2) = first_integrals(&CValue::Symbolic);
    (gradient_rows(&f1).vector_field(), gradient_rows(&f2).vector_field())
}

/// Lie derivatives of `θ` and the connection along both fields, and
/// their bracket, in the unimodular system.
pub fn symmetry_report() -> SymmetryReport {
    let (z1, z2) = symmetry_fields();
    symmetry_fields_check(h12(), &z1, &z2, &COLUMNS)
}
