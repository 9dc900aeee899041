//! Grids, transforms, quadrature and solvers shared by the other modules.

pub mod fourier;
pub mod fredholm;
pub mod grid;
pub mod hilbert;
pub mod interp;
pub mod ode;
pub mod tail;

pub use fourier::{cosine_kernel, fourier_kernel};
pub use fredholm::{fredholm_solve, trapezoid_weights, FredholmSolution, GrowingInverse};
pub use grid::{parity_defect, ComplexSamples, Parity, RealGrid, RealSamples};
pub use hilbert::{
    cpv_hilbert, outer_from_magnitude, outer_from_magnitude_at_origin, schwarz_extend, schwarz_extend_parity, Normalization, Origin, OuterReport,
    TailDiagnostic,
};
pub use interp::{derivative, Interpolant};
pub use ode::{ode_integrate_complex, Direction, OdeSolution};
pub use tail::{tail_limit, RationalTail, TailFit, TailModel};
