use std::f64::consts::TAU;

use nalgebra::Matrix2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::compile::PulseCompiler;
use super::protocol::preparation_sequence;
use super::rotation::{flip, Su2Rotation};
use crate::conventions::{DOWN, UP};
use crate::dynamics::{
    apply_displacement, bloch_block_map, interaction_map, BlochBlockMap, Coupling, PulseSequence,
    Resampling, SpinorState,
};
use crate::error::{Error, Result};
use crate::model::Spin;
use crate::C64;

/// Fourier coefficients above this size count as support.
pub const SUPPORT_TOL: f64 = 1e-10;

pub const VERIFICATION_SCHEMA: &str = "spinlat.verification.v1";

/// Finite Fourier series `f(q) = sum_k coeffs[k] e^{-i 2 pi (l_min + k) q}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierSeries {
    pub l_min: i64,
    /// `[re, im]` per harmonic.
    pub coeffs: Vec<[f64; 2]>,
}

impl FourierSeries {
    pub fn eval(&self, q: f64) -> C64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| C64::new(c[0], c[1]) * C64::cis(-TAU * (self.l_min + k as i64) as f64 * q))
            .sum()
    }

    fn coeff(&self, l: i64) -> C64 {
        let k = l - self.l_min;
        if k < 0 || k >= self.coeffs.len() as i64 {
            C64::new(0.0, 0.0)
        } else {
            let c = self.coeffs[k as usize];
            C64::new(c[0], c[1])
        }
    }
}

/// The column `(alpha(q), beta(q))` that `|q, down>` is mapped to, in one of
/// three equivalent encodings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum SynthesisTarget {
    /// The image of `|0, down>` as Wannier amplitudes.
    Wannier { state: SpinorState },
    /// `alpha` and `beta` as finite Fourier series.
    Fourier { alpha: FourierSeries, beta: FourierSeries },
    /// `alpha` and `beta` sampled on a uniform grid.
    Samples {
        q_grid: Vec<f64>,
        alpha: Vec<[f64; 2]>,
        beta: Vec<[f64; 2]>,
    },
}

impl SynthesisTarget {
    pub fn translation(sites: i64) -> Self {
        SynthesisTarget::Wannier {
            state: SpinorState::basis(sites, Spin::Down),
        }
    }

    pub fn identity() -> Self {
        Self::translation(0)
    }

    /// Wannier amplitudes of the target column.
    pub fn to_state(&self) -> Result<SpinorState> {
        match self {
            SynthesisTarget::Wannier { state } => Ok(state.clone()),
            SynthesisTarget::Fourier { alpha, beta } => {
                let lo = alpha.l_min.min(beta.l_min);
                let hi = (alpha.l_min + alpha.coeffs.len() as i64).max(beta.l_min + beta.coeffs.len() as i64) - 1;
                if hi < lo {
                    return Err(Error::InvalidParameter("empty Fourier target".into()));
                }
                let amps = (lo..=hi)
                    .map(|l| {
                        let mut a = [C64::new(0.0, 0.0); 2];
                        a[UP] = alpha.coeff(l);
                        a[DOWN] = beta.coeff(l);
                        a
                    })
                    .collect();
                SpinorState::new(lo, amps)
            }
            SynthesisTarget::Samples { q_grid, alpha, beta } => samples_to_state(q_grid, alpha, beta),
        }
    }

    /// Target block `[[conj beta, alpha], [-conj alpha, beta]]` at `q`.
    pub fn block(state: &SpinorState, q: f64) -> Matrix2<C64> {
        let v = state.bloch_components(q);
        let (a, b) = (v[UP], v[DOWN]);
        Matrix2::new(b.conj(), a, -a.conj(), b)
    }
}

fn samples_to_state(q_grid: &[f64], alpha: &[[f64; 2]], beta: &[[f64; 2]]) -> Result<SpinorState> {
    let n = q_grid.len();
    if n < 2 || alpha.len() != n || beta.len() != n {
        return Err(Error::GridMismatch(format!(
            "{n} grid points, {} alpha and {} beta samples",
            alpha.len(),
            beta.len()
        )));
    }
    let q0 = q_grid[0];
    if q_grid.iter().enumerate().any(|(j, &q)| (q - q0 - j as f64 / n as f64).abs() > 1e-12) {
        return Err(Error::GridMismatch("samples need a uniform grid of spacing 1/n".into()));
    }
    let lo = -(n as i64 / 2);
    let coeff = |samples: &[[f64; 2]], l: i64| -> C64 {
        samples
            .iter()
            .zip(q_grid)
            .map(|(s, &q)| C64::new(s[0], s[1]) * C64::cis(TAU * l as f64 * q))
            .sum::<C64>()
            / n as f64
    };
    let amps: Vec<[C64; 2]> = (lo..lo + n as i64)
        .map(|l| {
            let mut a = [C64::new(0.0, 0.0); 2];
            a[UP] = coeff(alpha, l);
            a[DOWN] = coeff(beta, l);
            a
        })
        .collect();
    // harmonics in the outer half of the window cannot be told apart from aliases
    let quarter = n as i64 / 4;
    if let Some((i, _)) = amps
        .iter()
        .enumerate()
        .find(|(i, a)| (lo + *i as i64).abs() >= quarter.max(1) && (a[0].norm() > SUPPORT_TOL || a[1].norm() > SUPPORT_TOL))
    {
        return Err(Error::InfiniteSupport(format!(
            "harmonic {} is above {SUPPORT_TOL:e} on a {n}-point grid",
            lo + i as i64
        )));
    }
    let trimmed = amps
        .into_iter()
        .map(|a| a.map(|c| if c.norm() > SUPPORT_TOL { c } else { C64::new(0.0, 0.0) }))
        .collect();
    SpinorState::normalized(lo, trimmed)
}

/// Compiled realization of a target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Synthesis {
    pub sequence: PulseSequence,
    pub rotations: Vec<Su2Rotation>,
    /// Site the protocol localizes the target onto.
    pub site: i64,
}

/// Rotations taking `|0, down>` to `phase |site, down>`.
fn translation_rotations(site: i64, phase: C64) -> Vec<Su2Rotation> {
    let mut out = Vec::new();
    let (first, second) = if site > 0 {
        (Coupling::R, Coupling::L)
    } else {
        (Coupling::L, Coupling::R)
    };
    for step in 0..site.abs() {
        let last = step + 1 == site.abs();
        out.push(Su2Rotation::new(flip(Spin::Down, C64::from(1.0)), first).unwrap());
        let p = if last { phase } else { C64::from(1.0) };
        out.push(Su2Rotation::new(flip(Spin::Up, p), second).unwrap());
    }
    out
}

/// Pulse sequence whose Bloch blocks send `|q, down>` to `(alpha(q), beta(q))`.
///
/// The target column is read as the Wannier image of `|0, down>`, localized
/// onto `|l*, down>` by the protocol, and reached from `|0, down>` by a
/// translation followed by the reversed localization.
pub fn synthesize_unitary(target: &SynthesisTarget, compiler: &PulseCompiler) -> Result<Synthesis> {
    let state = target.to_state()?;
    let prep = preparation_sequence(&state, Spin::Down)?;
    // prep maps |l*, down> to state / amplitude
    let phase = prep.amplitude / prep.amplitude.norm();
    let mut rotations = translation_rotations(prep.site, phase);
    let mut prep_rotations = prep.rotations;
    if prep.site == 0 && (phase - 1.0).norm() > 1e-14 {
        let z = Matrix2::new(phase.conj(), C64::from(0.0), C64::from(0.0), phase);
        match prep_rotations.first_mut() {
            Some(first) => first.matrix *= z,
            None => rotations.push(Su2Rotation::new(z, Coupling::R)?),
        }
    }
    rotations.extend(prep_rotations);
    let sequence = compiler.compile(&rotations)?;
    Ok(Synthesis {
        sequence,
        rotations,
        site: prep.site,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QFidelity {
    pub q: f64,
    pub fidelity: f64,
}

/// Per-quasimomentum agreement between a sequence and a target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub per_q: Vec<QFidelity>,
    pub worst_fidelity: f64,
    pub worst_q: f64,
    pub rotation_count: Option<usize>,
    pub segment_count: usize,
    /// Global phase of the simulated column relative to the target.
    pub state_phase: f64,
    /// Net quasimomentum shift of the sequence, in Brillouin zones.
    pub shift: f64,
    pub resampling: Option<Resampling>,
}

impl VerificationReport {
    pub fn infidelity(&self) -> f64 {
        1.0 - self.worst_fidelity
    }
}

/// Block fidelities `1/2 |tr(V_q^dagger U_q)|` of the simulated map against
/// the target, after removing the single global phase that the target column
/// leaves free.
pub fn verify_map(seq: &PulseSequence, target: &SynthesisTarget, q_grid: &[f64]) -> Result<VerificationReport> {
    let state = target.to_state()?;
    let (map, resampling) = if seq.has_gradient() {
        let (frame, inner) = interaction_map(seq, q_grid)?;
        let d = apply_displacement(&frame, &inner)?;
        (d.map, Some(d.resampling))
    } else {
        (bloch_block_map(seq, q_grid)?, None)
    };
    Ok(compare_blocks(&map, &state, seq.len(), resampling))
}

pub(crate) fn compare_blocks(
    map: &BlochBlockMap,
    state: &SpinorState,
    segment_count: usize,
    resampling: Option<Resampling>,
) -> VerificationReport {
    let targets: Vec<Matrix2<C64>> = map.q_grid.iter().map(|&q| SynthesisTarget::block(state, q)).collect();
    let overlap: C64 = (0..map.n_q())
        .map(|j| targets[j][(UP, DOWN)].conj() * map.alpha(j) + targets[j][(DOWN, DOWN)].conj() * map.beta(j))
        .sum();
    let theta = overlap.arg();
    let rel = theta - map.gamma;
    let fix = Matrix2::new(C64::cis(-rel), C64::from(0.0), C64::from(0.0), C64::cis(rel));
    let per_q: Vec<QFidelity> = (0..map.n_q())
        .into_par_iter()
        .map(|j| {
            let v = targets[j] * fix;
            QFidelity {
                q: map.q_grid[j],
                fidelity: 0.5 * (v.adjoint() * map.blocks[j]).trace().norm(),
            }
        })
        .collect();
    let worst = per_q
        .iter()
        .min_by(|a, b| a.fidelity.total_cmp(&b.fidelity))
        .copied()
        .unwrap_or(QFidelity { q: 0.0, fidelity: 1.0 });
    VerificationReport {
        schema: VERIFICATION_SCHEMA.into(),
        per_q,
        worst_fidelity: worst.fidelity,
        worst_q: worst.q,
        rotation_count: None,
        segment_count,
        state_phase: theta,
        shift: map.shift,
        resampling,
    }
}
