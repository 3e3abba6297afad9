//! Seeded generators for states, schedules and rotations.
//!
//! Every generator takes the RNG explicitly; use [`rng`] for a reproducible
//! stream from a `u64` seed.

use std::f64::consts::TAU;

use nalgebra::Matrix2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::control::{apply_rotations, Su2Rotation, SynthesisTarget};
use crate::dynamics::{ControlSegment, Coupling, PulseSequence, ScalarSchedule, ScalarSegment, SpinorState};
use crate::model::Spin;
use crate::C64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Haar-random element of SU(2).
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<C64> {
    let x: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let a = C64::new(x[0], x[1]) / n;
    let b = C64::new(x[2], x[3]) / n;
    Matrix2::new(a, -b.conj(), b, a.conj())
}

/// Reachable state occupying exactly `sites` sites, built by alternating
/// random pair rotations from `|0, down>`. Odd counts start in `R` mode,
/// even counts in `L` mode.
pub fn random_reachable_state<R: Rng + ?Sized>(rng: &mut R, sites: usize) -> SpinorState {
    let sites = sites.max(1);
    let mut mode = if sites % 2 == 1 { Coupling::R } else { Coupling::L };
    let rotations: Vec<Su2Rotation> = (0..sites)
        .map(|_| {
            let r = Su2Rotation::new(random_su2(rng), mode).expect("Haar sample is unitary");
            mode = mode.alternate();
            r
        })
        .collect();
    let state = apply_rotations(&rotations, &SpinorState::basis(0, Spin::Down));
    SpinorState::normalized(state.l_min(), state.amps().to_vec())
        .expect("rotations preserve the norm")
        .with_phase(rng.random_range(0.0..TAU))
}

/// Wannier-form synthesis target on `sites` sites.
pub fn random_target<R: Rng + ?Sized>(rng: &mut R, sites: usize) -> SynthesisTarget {
    SynthesisTarget::Wannier {
        state: random_reachable_state(rng, sites),
    }
}

/// Ranges of [`random_sequence`].
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceSpec {
    pub max_omega: f64,
    pub max_detuning: f64,
    pub max_force: f64,
    pub max_duration: f64,
    /// Allowed coupling modes, drawn uniformly.
    pub modes: Vec<Coupling>,
}

impl Default for SequenceSpec {
    fn default() -> Self {
        SequenceSpec {
            max_omega: 2.0,
            max_detuning: 1.0,
            max_force: 1.0,
            max_duration: 1.5,
            modes: vec![Coupling::R, Coupling::L, Coupling::Both],
        }
    }
}

impl SequenceSpec {
    pub fn gradient_free() -> Self {
        SequenceSpec {
            max_force: 0.0,
            ..Default::default()
        }
    }
}

pub fn random_segment<R: Rng + ?Sized>(rng: &mut R, spec: &SequenceSpec) -> ControlSegment {
    let mode = spec.modes[rng.random_range(0..spec.modes.len())];
    let phi = rng.random_range(0.0..TAU);
    let duration = rng.random_range(0.05..=spec.max_duration.max(0.05));
    let mut seg = match mode {
        Coupling::Both => ControlSegment::both(
            rng.random_range(0.0..=spec.max_omega),
            rng.random_range(0.0..=spec.max_omega),
            phi,
            duration,
        ),
        m => ControlSegment::pulse(m, rng.random_range(0.0..=spec.max_omega), phi, duration),
    };
    seg.delta = rng.random_range(-1.0..=1.0) * spec.max_detuning;
    if spec.max_force > 0.0 {
        seg.force = rng.random_range(-1.0..=1.0) * spec.max_force;
        seg.delta_l = rng.random_range(0.0..1.0);
    }
    seg
}

pub fn random_sequence<R: Rng + ?Sized>(rng: &mut R, segments: usize, spec: &SequenceSpec) -> PulseSequence {
    (0..segments).map(|_| random_segment(rng, spec)).collect()
}

/// Scalar hopping/force schedule with `|hopping| <= max_hopping` and
/// `|force| <= max_force`.
pub fn random_scalar_schedule<R: Rng + ?Sized>(
    rng: &mut R,
    segments: usize,
    max_hopping: f64,
    max_force: f64,
) -> ScalarSchedule {
    ScalarSchedule::new(
        (0..segments)
            .map(|_| ScalarSegment {
                duration: rng.random_range(0.05..1.5),
                hopping: rng.random_range(-1.0..=1.0) * max_hopping,
                force: rng.random_range(-1.0..=1.0) * max_force,
            })
            .collect(),
    )
}
