//! Exact spectra, mean-field dynamics and semiclassical quantization for
//! bosonic n:m conversion Hamiltonians `H = ε s_z + v s_x`.
//!
//! The layers are
//! * [`algebra`]: structure polynomials `P`, `F`, `G` of the deformed su(2) algebra,
//! * [`quantum`]: tridiagonal Fock-space operators and exact spectra,
//! * [`meanfield`]: Kummer shapes, fixed points, bifurcations and trajectories,
//! * [`semiclassics`]: WKB quantization, periods and densities of states.

pub mod algebra;
pub mod checks;
pub mod error;
pub mod io;
pub mod meanfield;
pub mod model;
pub mod numerics;
pub mod quantum;
pub mod semiclassics;

pub use error::{Error, Result};
pub use model::ModelSpec;
