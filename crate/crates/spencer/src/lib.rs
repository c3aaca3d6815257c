//! Spencer maps of linear Lie algebras, and the torsion computations for
//! the algebra `V(0,0) + V(2,0) + V(0,2)` acting on `V(1,2)`.

pub mod coords;
pub mod error;
pub mod lla;
pub mod torsion;

pub use coords::{decode_t, spencer_in_coords, PhiCoords, SpencerFormula, TorsionCoords};
pub use error::{Result, SpencerError};
pub use lla::{prolongation_and_h02, LinearLieAlgebra, SpencerDims};
