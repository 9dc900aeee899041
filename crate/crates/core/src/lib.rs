//! Forward and inverse frequency-domain scattering for a variable-area
//! acoustic duct.

pub mod area_reconstruction;
pub mod error;
pub mod forward;
pub mod io;
pub mod kernel_solvers;
pub mod numerics;
pub mod phase_retrieval;
pub mod reference;
pub mod verify;

pub use error::{Error, Result};
