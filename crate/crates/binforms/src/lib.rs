//! Binary forms in two variable pairs `(x1, y1)` and `(x2, y2)`: the
//! transvectant pairings, the sl2 x sl2 action, concrete modules with
//! isotypic decomposition, and the maps of the sequence
//! `0 -> V_{k-1} -> V(1,k) -> V_{k+1} -> 0`.

pub mod action;
pub mod biform;
pub mod equivariance;
pub mod error;
pub mod grammar;
pub mod module;
pub mod seq;

pub use action::{act, double_bracket, Gen, LieElt, Slot, GENERATORS};
pub use biform::{transvectant, transvectant2, weight_basis, BiForm};
pub use error::{FormError, Result};
pub use module::{clebsch_gordan, clebsch_gordan2, Decomposition, Module};
