//! Area profile to potential, Jost solution, scattering data and the
//! synthesized acoustic observables.

mod area;
mod jost;
mod observables;

pub use area::{area_to_potential, AreaFunction, BoundaryParameter, DuctEnds, PhysicalConstants, Potential};
pub use jost::{
    jost_boundary, jost_function, jost_solve, scattering_coefficients, JostBoundary, JostField, JostFunctionSamples,
    ScatteringTriple, STEP_PHASE,
};
pub use observables::{
    acoustic_field, default_observable_grid, mic_pressure, observable, output_impedance, AcousticField,
    ObservableKind, SpectralData, SpectralValues,
};

use crate::error::Result;
use crate::numerics::RealGrid;

/// Every observable of an area profile on `kgrid`, with `r` used for the
/// microphone kind.
pub fn synthesize(
    area: &AreaFunction,
    kinds: &[ObservableKind],
    kgrid: &RealGrid,
    consts: PhysicalConstants,
    r: f64,
) -> Result<Vec<SpectralData>> {
    let (q, bp) = area_to_potential(area)?;
    let b = jost_boundary(&q, kgrid)?;
    let fs = jost_function(&b, bp)?;
    kinds
        .iter()
        .map(|&kind| {
            let r = (kind == ObservableKind::MicPressureMag).then_some(r);
            observable(kind, area.ends(), &b, &fs, consts, r)
        })
        .collect()
}
