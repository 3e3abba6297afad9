use serde::{Deserialize, Serialize};

use super::reachability::{reachability_check, REACHABILITY_TOL};
use super::rotation::{apply_rotations, pair_rotation, Su2Rotation};
use crate::dynamics::{Coupling, SpinorState};
use crate::error::{Error, Result};
use crate::model::Spin;
use crate::C64;

/// Sub-wells holding at most this amplitude count as empty.
pub const EXTENT_TOL: f64 = 1e-12;
/// A left-edge pair below this norm is skipped with an identity step.
pub const DEGENERATE_EDGE: f64 = 1e-14;

/// Rotations that concentrate a state on one Wannier ket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Localization {
    pub rotations: Vec<Su2Rotation>,
    pub site: i64,
    pub spin: Spin,
    /// Amplitude left on `|site, spin>`; unit modulus up to round-off.
    pub amplitude: C64,
}

/// Rotations that build a state from one Wannier ket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preparation {
    /// Applied in order to `|site, spin>`, they give `target / amplitude`.
    pub rotations: Vec<Su2Rotation>,
    pub site: i64,
    pub spin: Spin,
    pub amplitude: C64,
}

fn subwell(k: i64) -> (i64, Spin) {
    (k.div_euclid(2), if k.rem_euclid(2) == 0 { Spin::Down } else { Spin::Up })
}

/// Amplitudes `(up, down)` of the pair whose left sub-well is `k`, and its mode.
fn pair_at(state: &SpinorState, k: i64) -> (C64, C64, Coupling) {
    let (l, spin) = subwell(k);
    match spin {
        // (|l, down>, |l, up>)
        Spin::Down => (state.amp(l, Spin::Up), state.amp(l, Spin::Down), Coupling::R),
        // (|l, up>, |l + 1, down>)
        Spin::Up => (state.amp(l, Spin::Up), state.amp(l + 1, Spin::Down), Coupling::L),
    }
}

fn step(state: &SpinorState, k: i64, target: Spin) -> Su2Rotation {
    let (a, b, mode) = pair_at(state, k);
    let mut rot = Su2Rotation::identity(mode);
    if (a.norm_sqr() + b.norm_sqr()).sqrt() > DEGENERATE_EDGE {
        rot.matrix = pair_rotation(a, b, target);
    }
    rot.edge = Some(target);
    rot
}

/// Edge-by-edge localization of a reachable state.
///
/// Each step rotates the left-most occupied pair into its right-hand sub-well.
/// Orthogonality of the state to its translations empties the right-most
/// sub-well at the same time, so every step removes two sub-wells. The last
/// step sends the remaining pair to `final_spin`.
pub fn localization_sequence(state: &SpinorState, final_spin: Spin) -> Result<Localization> {
    let report = reachability_check(state, REACHABILITY_TOL)?;
    if !report.reachable {
        return Err(Error::Unreachable {
            j: report.worst_j.unwrap_or(0),
            magnitude: report.worst_magnitude,
        });
    }
    let mut current = state.clone();
    let mut rotations = Vec::new();
    let limit = 2 * state.n_sites() + 2;
    loop {
        let (k_min, k_max) = current
            .subwell_extent(EXTENT_TOL)
            .ok_or(Error::NotNormalized { norm_sqr: 0.0 })?;
        let rot = if k_min == k_max {
            let (l, spin) = subwell(k_min);
            if spin == final_spin {
                return Ok(Localization {
                    rotations,
                    site: l,
                    spin,
                    amplitude: current.amp(l, spin),
                });
            }
            // flip within the right pair of site l
            step(&current, 2 * l, final_spin)
        } else if k_max == k_min + 1 {
            step(&current, k_min, final_spin)
        } else {
            let into = if k_min.rem_euclid(2) == 0 { Spin::Up } else { Spin::Down };
            step(&current, k_min, into)
        };
        current = rot.apply(&current);
        rotations.push(rot);
        if rotations.len() > limit {
            return Err(Error::InvalidParameter(format!(
                "localization did not terminate within {limit} rotations"
            )));
        }
    }
}

/// Reversed, inverted localization of `target` onto `|site, initial_spin>`.
pub fn preparation_sequence(target: &SpinorState, initial_spin: Spin) -> Result<Preparation> {
    let loc = localization_sequence(target, initial_spin)?;
    Ok(Preparation {
        rotations: loc.rotations.iter().rev().map(Su2Rotation::inverse).collect(),
        site: loc.site,
        spin: loc.spin,
        amplitude: loc.amplitude,
    })
}

/// Population left on the dominant ket after the rotations.
pub fn localized_population(state: &SpinorState, rotations: &[Su2Rotation]) -> f64 {
    apply_rotations(rotations, state).peak().2
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn localized_target_needs_nothing() {
        let loc = localization_sequence(&SpinorState::basis(0, Spin::Up), Spin::Up).unwrap();
        assert!(loc.rotations.is_empty());
        assert_eq!((loc.site, loc.spin), (0, Spin::Up));
        let prep = preparation_sequence(&SpinorState::basis(0, Spin::Down), Spin::Down).unwrap();
        assert!(prep.rotations.is_empty());
    }

    #[test]
    fn single_site_superposition_takes_one_rotation() {
        let s = SpinorState::new(0, vec![[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]]).unwrap();
        for spin in [Spin::Up, Spin::Down] {
            let loc = localization_sequence(&s, spin).unwrap();
            assert_eq!(loc.rotations.len(), 1);
            assert_eq!(loc.rotations[0].mode, Coupling::R);
            let out = apply_rotations(&loc.rotations, &s);
            assert!((out.amp(0, spin).norm() - 1.0).abs() < 1e-15);
            assert!((out.amp(0, spin) - loc.amplitude).norm() < 1e-15);
        }
    }

    #[test]
    fn wrong_spin_ket_is_flipped() {
        let loc = localization_sequence(&SpinorState::basis(3, Spin::Up), Spin::Down).unwrap();
        assert_eq!(loc.rotations.len(), 1);
        assert_eq!((loc.site, loc.spin), (3, Spin::Down));
    }

    #[test]
    fn left_pair_state_localizes_in_one_step() {
        // (|0, up> + i |1, down>) / sqrt 2
        let s = SpinorState::new(0, vec![[c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, FRAC_1_SQRT_2)]]).unwrap();
        let loc = localization_sequence(&s, Spin::Down).unwrap();
        assert_eq!(loc.rotations.len(), 1);
        assert_eq!(loc.rotations[0].mode, Coupling::L);
        assert_eq!((loc.site, loc.spin), (1, Spin::Down));
    }

    #[test]
    fn unreachable_state_is_rejected() {
        let s = SpinorState::new(0, vec![[c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)], [c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)]]).unwrap();
        assert!(matches!(
            localization_sequence(&s, Spin::Down),
            Err(Error::Unreachable { j: 1, .. })
        ));
    }

    #[test]
    fn round_trip_restores_target() {
        let s = SpinorState::new(0, vec![[c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, FRAC_1_SQRT_2)]]).unwrap();
        let prep = preparation_sequence(&s, Spin::Up).unwrap();
        let built = apply_rotations(&prep.rotations, &SpinorState::basis(prep.site, prep.spin));
        assert!((built.fidelity(&s) - 1.0).abs() < 1e-14);
    }
}
