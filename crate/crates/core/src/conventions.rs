//! Units, basis orderings and phase conventions used throughout the crate.
//!
//! # Units
//!
//! `hbar = 1`. Energies are in recoil units `E_R = hbar^2 k_L^2 / 2m`, times in
//! `hbar / E_R`, lengths in lattice periods `L = lambda_L / 2`, and
//! quasimomenta in units of the reciprocal lattice vector `K = 4 pi / lambda_L`,
//! so the first Brillouin zone is `q in [-1/2, 1/2)`. A uniform force `F` is an
//! energy per lattice period.
//!
//! # Lattice potentials
//!
//! Spin `s` sees `-V_s cos(2 pi z + delta_s)` with `z` in periods. The depth
//! `V_s` multiplies the cosine directly (peak-to-peak swing `2 V_s`), so the
//! harmonic trap frequency is `hbar omega = sqrt(8 V_s)`.
//!
//! # Site labels
//!
//! Wannier state `|l, down>` sits at `l + z_down` and `|l, up>` at `l + z_up`
//! with `z_down <= z_up <= z_down + 1`: the up state labelled `l` is the first
//! up well to the right of `|l, down>`. Ordering the wells along the chain
//! gives the sub-well index `k = 2l` for `|l, down>` and `k = 2l + 1` for
//! `|l, up>`.
//!
//! # Tight-binding couplings
//!
//! * right pair: `|l, down> <-> |l, up>` (rate `Omega_R`)
//! * left pair: `|l, down> <-> |l - 1, up>` (rate `Omega_L`)
//!
//! The generator of a segment is
//! `H = sum_l [-Delta/2 sigma_z^l - 1/2 (e^{i phi} (Omega_R s_+^{l,R} + Omega_L s_+^{l,L}) + h.c.)]
//!      + F sum_l [l P_{l,down} + (l + delta_l) P_{l,up}]`.
//!
//! # Two-component ordering
//!
//! Every 2x2 spin matrix (pair rotations, Bloch blocks) uses the ordering
//! `(up, down)`: index 0 is spin up, index 1 is spin down. Real-space vectors
//! interleave `(l, down), (l, up)` so that vector order equals sub-well order.
//!
//! # Bloch states
//!
//! `|q, s> = sum_l e^{i 2 pi l q} |l, s>`. A state with Wannier amplitudes
//! `c_{l,s}` has Bloch components `psi_s(q) = sum_l c_{l,s} e^{-i 2 pi l q}`.
//! With this convention the left coupling enters the Bloch block as
//! `Omega_L e^{+i 2 pi q}`.
//!
//! A translation-invariant map acts as a 2x2 block `U_q`. The pair
//! `(alpha(q), beta(q))` is the column of `U_q` that `|q, down>` maps to:
//! `U |0, down> = sum_q alpha(q) |q, up> + beta(q) |q, down>`. The identity map
//! therefore has `alpha = 0, beta = 1`.
//!
//! # Pulses
//!
//! A resonant pair segment of area `theta = Omega tau` and phase `phi` acts on
//! `(up, down)` as
//! `P(theta, phi) = [[cos(theta/2), i sin(theta/2) e^{i phi}], [i sin(theta/2) e^{-i phi}, cos(theta/2)]]`.
//!
//! # Gradient frame
//!
//! `eta = int F dt` is a phase per lattice period (radians). The corresponding
//! quasimomentum shift is `eta / 2 pi` Brillouin zones. `chi = int delta_l F dt`.
//! The frame operator is `D = sum_l e^{-i eta l} (P_{l,down} + e^{-i chi} P_{l,up})`.

use num_complex::Complex64;

/// Complex scalar used everywhere.
pub type C64 = Complex64;

/// Index of spin up in every 2x2 spin matrix.
pub const UP: usize = 0;
/// Index of spin down in every 2x2 spin matrix.
pub const DOWN: usize = 1;
