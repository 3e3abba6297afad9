use std::f64::consts::TAU;
use std::ops::Add;

use nalgebra::Matrix2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bloch::{segment_block, BlochBlockMap};
use super::pulse::{ControlSegment, Coupling, PulseSequence};
use crate::conventions::{DOWN, UP};
use crate::error::{Error, Result};
use crate::model::Spin;
use crate::C64;

/// Phases accumulated by a uniform force: `chi = int delta_l F dt` and
/// `eta = int F dt`, both in radians.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GradientFrame {
    pub chi: f64,
    pub eta: f64,
}

impl GradientFrame {
    pub fn of_segment(segment: &ControlSegment) -> Self {
        GradientFrame {
            chi: segment.delta_l * segment.force * segment.duration,
            eta: segment.force * segment.duration,
        }
    }

    /// Quasimomentum shift `eta / 2 pi`, in Brillouin zones.
    pub fn q_shift(&self) -> f64 {
        self.eta / TAU
    }

    /// Diagonal element of `D = sum_l e^{-i eta l} (P_{l,down} + e^{-i chi} P_{l,up})`.
    pub fn displacement_phase(&self, l: i64, spin: Spin) -> C64 {
        let spin_phase = match spin {
            Spin::Up => self.chi,
            Spin::Down => 0.0,
        };
        C64::cis(-self.eta * l as f64 - spin_phase)
    }

    /// `e^{-i chi sigma_z / 2}` in the `(up, down)` basis; together with the
    /// global `e^{-i chi / 2}` it is the spin part of `D`.
    pub fn spin_rotation(&self) -> Matrix2<C64> {
        let mut z = Matrix2::zeros();
        z[(UP, UP)] = C64::cis(-0.5 * self.chi);
        z[(DOWN, DOWN)] = C64::cis(0.5 * self.chi);
        z
    }
}

impl Add for GradientFrame {
    type Output = GradientFrame;

    fn add(self, rhs: GradientFrame) -> GradientFrame {
        GradientFrame {
            chi: self.chi + rhs.chi,
            eta: self.eta + rhs.eta,
        }
    }
}

/// Accumulated frame of a whole sequence.
pub fn gradient_frame(seq: &PulseSequence) -> GradientFrame {
    seq.iter()
        .map(GradientFrame::of_segment)
        .fold(GradientFrame::default(), Add::add)
}

/// Interaction-picture block of `seq` at quasimomentum `q`, i.e. the block of
/// `D^dagger U` where `U` is the lab-frame propagator.
///
/// In the interaction picture the right coupling carries `e^{i chi(t)}` and the
/// left coupling `e^{i (chi(t) - eta(t))}`. Within a segment the linear part
/// of that phase is removed by a co-rotating frame, leaving a static
/// gradient-free block followed by a residual `sigma_z` rotation. A force is
/// therefore only allowed while at most one pair is driven.
pub fn interaction_block(seq: &PulseSequence, q: f64) -> Result<Matrix2<C64>> {
    let mut frame = GradientFrame::default();
    let mut u = Matrix2::identity();
    for seg in seq {
        let sweep = match (seg.force, seg.isolated_mode()) {
            (f, _) if f == 0.0 => 0.0,
            (f, Some(Coupling::L)) if seg.rates() != (0.0, 0.0) => f * (seg.delta_l - 1.0),
            (f, Some(_)) => f * seg.delta_l,
            (_, None) => {
                return Err(Error::GradientNotAllowed(
                    "a force while both pairs are driven has no block-diagonal frame".into(),
                ))
            }
        };
        let mut rotated = seg.clone();
        rotated.phi += frame.chi;
        rotated.delta -= sweep;
        rotated.force = 0.0;
        let block = segment_block(&rotated, q - frame.q_shift());
        let half = 0.5 * sweep * seg.duration;
        let residual = Matrix2::new(C64::cis(half), C64::from(0.0), C64::from(0.0), C64::cis(-half));
        u = residual * block * u;
        frame = frame + GradientFrame::of_segment(seg);
    }
    Ok(u)
}

/// Frame of `seq` and its interaction-picture block map.
pub fn interaction_map(seq: &PulseSequence, q_grid: &[f64]) -> Result<(GradientFrame, BlochBlockMap)> {
    seq.validate()?;
    let blocks = q_grid
        .par_iter()
        .map(|&q| interaction_block(seq, q))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        gradient_frame(seq),
        BlochBlockMap {
            q_grid: q_grid.to_vec(),
            blocks,
            gamma: 0.0,
            shift: 0.0,
        },
    ))
}

/// Lab-frame block map of `seq`, evaluated exactly at the displaced
/// quasimomenta so no resampling is needed.
pub fn lab_map(seq: &PulseSequence, q_grid: &[f64]) -> Result<BlochBlockMap> {
    seq.validate()?;
    let frame = gradient_frame(seq);
    let z = frame.spin_rotation();
    let shift = frame.q_shift();
    let blocks = q_grid
        .par_iter()
        .map(|&q| interaction_block(seq, q + shift).map(|v| z * v))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlochBlockMap {
        q_grid: q_grid.to_vec(),
        blocks,
        gamma: -0.5 * frame.chi,
        shift,
    })
}

/// How a displaced map was brought back onto its grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Resampling {
    /// The shift is a whole number of grid steps; blocks were relabelled.
    OnGrid { steps: usize },
    /// The shift falls between grid points; blocks were evaluated from their
    /// trigonometric interpolant with harmonics up to `order`. Exact when the
    /// map couples sites less than `order` apart.
    Trigonometric { order: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Displaced {
    pub map: BlochBlockMap,
    pub resampling: Resampling,
}

/// Composes a map with the frame operator `D`: quasimomenta are relabelled
/// by `eta / 2 pi`, blocks pick up `e^{-i chi sigma_z / 2}` and the global
/// phase `e^{-i chi / 2}`.
pub fn apply_displacement(frame: &GradientFrame, map: &BlochBlockMap) -> Result<Displaced> {
    let n = map.n_q();
    if n == 0 {
        return Err(Error::GridMismatch("empty grid".into()));
    }
    let q0 = map.q_grid[0];
    if map
        .q_grid
        .iter()
        .enumerate()
        .any(|(j, &q)| (q - q0 - j as f64 / n as f64).abs() > 1e-12)
    {
        return Err(Error::GridMismatch(
            "displacement needs a uniform grid of spacing 1/n".into(),
        ));
    }
    let steps_f = frame.q_shift() * n as f64;
    let steps = steps_f.round();
    let z = frame.spin_rotation();
    let (shifted, resampling) = if (steps_f - steps).abs() < 1e-9 {
        let s = (steps as i64).rem_euclid(n as i64) as usize;
        let blocks = (0..n).map(|j| map.blocks[(j + s) % n]).collect::<Vec<_>>();
        (blocks, Resampling::OnGrid { steps: s })
    } else {
        let blocks = trig_resample(map, frame.q_shift());
        (blocks, Resampling::Trigonometric { order: n / 2 })
    };
    Ok(Displaced {
        map: BlochBlockMap {
            q_grid: map.q_grid.clone(),
            blocks: shifted.into_iter().map(|b| z * b).collect(),
            gamma: map.gamma - 0.5 * frame.chi,
            shift: map.shift + frame.q_shift(),
        },
        resampling,
    })
}

/// Blocks at `q_j + dq`, from the interpolant `sum_l v_l e^{-i 2 pi l q}` with
/// `l` in `-n/2..n - n/2`.
fn trig_resample(map: &BlochBlockMap, dq: f64) -> Vec<Matrix2<C64>> {
    let n = map.n_q();
    let lo = -(n as i64 / 2);
    let coeffs: Vec<Matrix2<C64>> = (0..n as i64)
        .map(|k| {
            let l = lo + k;
            map.q_grid
                .iter()
                .zip(&map.blocks)
                .map(|(&q, b)| b * C64::cis(TAU * l as f64 * q))
                .sum::<Matrix2<C64>>()
                / C64::from(n as f64)
        })
        .collect();
    map.q_grid
        .iter()
        .map(|&q| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * C64::cis(-TAU * (lo + k as i64) as f64 * (q + dq)))
                .sum()
        })
        .collect()
}
