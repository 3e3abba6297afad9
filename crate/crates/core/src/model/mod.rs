//! Static lattice physics of a lin-theta-lin spinor lattice.

pub(crate) mod bands;
mod lattice;
mod wannier;

pub use bands::{band_structure, BlochSpectrum, DEFAULT_PLANEWAVES, DEFAULT_Q_POINTS};
pub use lattice::{adiabatic_potentials, lightshift_params, AdiabaticCurves, LatticeConfig, Spin};
pub use wannier::{
    franck_condon, gaussian_fc_ratio, gaussian_fc_ratio_for, harmonic_density_width,
    wannier_on_grid, wannier_state, FranckCondon, WannierFunction, POINTS_PER_PERIOD,
    TAIL_WARNING,
};
