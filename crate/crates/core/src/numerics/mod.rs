//! Grids, wave fields, the unitary Fourier transform, comparison windows and
//! oscillatory quadrature.

mod field;
mod grid;
pub mod quadrature;
mod window;

pub use field::{fourier, Representation, WaveField};
pub use grid::{make_grid, Grid, PhysParams};
pub use quadrature::{cubic_phase_integral, cubic_phase_limit};
pub use window::{
    apodize, central_window, edge_leakage, fidelity, inner_product, relative_distance, smooth_indicator,
    taper_interior, windowed_norm, Window, WindowKind, DEFAULT_INTERIOR_FRACTION, EDGE_TAPER_FRACTION,
};
