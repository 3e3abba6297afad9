use nalgebra::{Matrix2, Vector2};
use rayon::prelude::*;

use super::generator::bloch_generator;
use super::linalg::expm2;
use super::pulse::{ControlSegment, PulseSequence};
use super::state::SpinorState;
use crate::conventions::{DOWN, UP};
use crate::error::{Error, Result};
use crate::C64;

/// `q_j = -1/2 + j / n` for `j = 0..n`.
pub fn uniform_q_grid(n: usize) -> Vec<f64> {
    crate::model::bands::uniform_zone(n)
}

/// A translation-invariant map sampled on a quasimomentum grid.
///
/// Acting on Bloch components it gives
/// `psi_out(q_j) = e^{i gamma} blocks[j] psi_in(q_j + shift)`,
/// with `shift` in Brillouin zones. Blocks use the `(up, down)` ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochBlockMap {
    pub q_grid: Vec<f64>,
    pub blocks: Vec<Matrix2<C64>>,
    pub gamma: f64,
    pub shift: f64,
}

impl BlochBlockMap {
    pub fn identity(q_grid: &[f64]) -> Self {
        BlochBlockMap {
            q_grid: q_grid.to_vec(),
            blocks: vec![Matrix2::identity(); q_grid.len()],
            gamma: 0.0,
            shift: 0.0,
        }
    }

    pub fn n_q(&self) -> usize {
        self.q_grid.len()
    }

    /// `e^{i gamma} blocks[j]`.
    pub fn full_block(&self, j: usize) -> Matrix2<C64> {
        self.blocks[j] * C64::cis(self.gamma)
    }

    /// Up component of the image of `|q_j, down>`.
    pub fn alpha(&self, j: usize) -> C64 {
        self.full_block(j)[(UP, DOWN)]
    }

    /// Down component of the image of `|q_j, down>`.
    pub fn beta(&self, j: usize) -> C64 {
        self.full_block(j)[(DOWN, DOWN)]
    }

    pub fn alphas(&self) -> Vec<C64> {
        (0..self.n_q()).map(|j| self.alpha(j)).collect()
    }

    pub fn betas(&self) -> Vec<C64> {
        (0..self.n_q()).map(|j| self.beta(j)).collect()
    }

    /// Largest deviation of any block from unitarity.
    pub fn unitarity_error(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                (b.adjoint() * b - Matrix2::identity())
                    .iter()
                    .map(|x| x.norm())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Bloch components of the image of `state` at every grid point.
    pub fn apply(&self, state: &SpinorState) -> Vec<Vector2<C64>> {
        self.q_grid
            .iter()
            .enumerate()
            .map(|(j, &q)| self.full_block(j) * state.bloch_components(q + self.shift))
            .collect()
    }
}

/// Propagator of one gradient-free segment at quasimomentum `q`.
pub fn segment_block(segment: &ControlSegment, q: f64) -> Matrix2<C64> {
    expm2(&bloch_generator(segment, q), segment.duration)
}

fn reject_gradient(seq: &PulseSequence) -> Result<()> {
    seq.validate()?;
    if seq.has_gradient() {
        return Err(Error::GradientNotAllowed(
            "Bloch-space evolution needs F = 0; use the gradient frame".into(),
        ));
    }
    Ok(())
}

/// Evolves one spinor per grid point independently.
pub fn evolve_bloch(
    initial: &[Vector2<C64>],
    q_grid: &[f64],
    seq: &PulseSequence,
) -> Result<Vec<Vector2<C64>>> {
    reject_gradient(seq)?;
    if initial.len() != q_grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} spinors for {} grid points",
            initial.len(),
            q_grid.len()
        )));
    }
    Ok(initial
        .par_iter()
        .zip(q_grid.par_iter())
        .map(|(v, &q)| seq.iter().fold(*v, |acc, seg| segment_block(seg, q) * acc))
        .collect())
}

/// Block map of a gradient-free sequence.
pub fn bloch_block_map(seq: &PulseSequence, q_grid: &[f64]) -> Result<BlochBlockMap> {
    reject_gradient(seq)?;
    let blocks = q_grid
        .par_iter()
        .map(|&q| {
            seq.iter()
                .fold(Matrix2::identity(), |acc, seg| segment_block(seg, q) * acc)
        })
        .collect();
    Ok(BlochBlockMap {
        q_grid: q_grid.to_vec(),
        blocks,
        gamma: 0.0,
        shift: 0.0,
    })
}
