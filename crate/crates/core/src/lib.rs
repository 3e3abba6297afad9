//! Coherent control of atomic transport in one-dimensional spin-dependent
//! optical lattices.
//!
//! The crate is organised in three layers:
//!
//! * [`model`]: static lattice physics. Light-shift depths and phases,
//!   microwave-dressed potentials, band structure, Wannier functions and the
//!   Franck-Condon weights of the left and right microwave couplings.
//! * [`dynamics`]: the tight-binding spinor chain. Real-space and Bloch-space
//!   propagation of piecewise-constant control schedules, the gradient frame,
//!   and the closed-form propagator of a scalar chain in a uniform force.
//! * [`control`]: reachability, the edge-by-edge localization protocol,
//!   compilation of SU(2) rotations into microwave segments, and synthesis of
//!   translation-invariant unitaries.
//!
//! See [`conventions`] for units and phase conventions. The `spinlat` binary
//! wraps the file-based workflows in [`cli`].

pub mod cli;
pub mod control;
pub mod conventions;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod random;

pub use conventions::C64;
pub use error::{Error, Result};
