//! Exterior differential algebra on the coframe of a torsion-free
//! structure with two binary-form slots: structure equations, closure
//! checks, curvature derivation and ideal reductions.

pub mod derive;
pub mod error;
pub mod form;
pub mod ideal;
pub mod symmetry;
pub mod system;

pub use error::{CalcError, Result};
pub use form::{fpair, FormExpr};
pub use system::{Coefficients, DSquaredReport, Mode, StructureSystem};
pub use derive::{bianchi_solve, derive_curvature_derivatives, BianchiReport, DerivationReport};
pub use ideal::{frobenius_residual, restriction_chain, LinearIdeal};
pub use symmetry::{symmetry_fields_check, VectorField};
