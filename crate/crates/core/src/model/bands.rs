use std::f64::consts::TAU;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use super::lattice::{LatticeConfig, Spin};
use crate::error::{Error, Result};
use crate::C64;

/// Plane waves kept per quasimomentum unless overridden.
pub const DEFAULT_PLANEWAVES: usize = 41;
/// Brillouin-zone grid size unless overridden.
pub const DEFAULT_Q_POINTS: usize = 128;

const CONVERGENCE_TOL: f64 = 1e-10;

/// Bloch bands of one spin lattice on a uniform quasimomentum grid.
#[derive(Clone, Debug)]
pub struct BlochSpectrum {
    pub spin: Spin,
    pub depth: f64,
    pub phase: f64,
    /// Center of the site-0 well, in periods.
    pub well_offset: f64,
    /// `q_j = -1/2 + j / n_q`.
    pub q_grid: Vec<f64>,
    /// `bands[j][n]` is `E_n(q_j)`, ascending in `n`.
    pub bands: Vec<Vec<f64>>,
    /// `coeffs[j]` holds the Bloch states of `q_j` as columns. Row `r` is the
    /// plane wave `exp(i 2 pi (q + m) z)` with `m = r - (n_pw - 1) / 2`.
    pub coeffs: Vec<DMatrix<C64>>,
}

impl BlochSpectrum {
    pub fn n_planewaves(&self) -> usize {
        self.coeffs.first().map_or(0, |c| c.nrows())
    }

    pub fn n_bands(&self) -> usize {
        self.bands.first().map_or(0, Vec::len)
    }

    pub fn n_q(&self) -> usize {
        self.q_grid.len()
    }

    /// Harmonic index of plane-wave row `r`.
    pub fn harmonic(&self, r: usize) -> i64 {
        r as i64 - (self.n_planewaves() as i64 - 1) / 2
    }

    /// `E_n(q)` over the grid.
    pub fn band(&self, n: usize) -> Vec<f64> {
        self.bands.iter().map(|e| e[n]).collect()
    }

    pub fn bandwidth(&self, n: usize) -> f64 {
        let band = self.band(n);
        let max = band.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = band.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// `psi_{n, q_j}(z)`, normalized to one over a lattice period.
    pub fn bloch_value(&self, j: usize, band: usize, z: f64) -> C64 {
        let q = self.q_grid[j];
        let col = self.coeffs[j].column(band);
        col.iter()
            .enumerate()
            .map(|(r, c)| c * C64::cis(TAU * (q + self.harmonic(r) as f64) * z))
            .sum()
    }
}

pub(crate) fn uniform_zone(n_q: usize) -> Vec<f64> {
    (0..n_q).map(|j| -0.5 + j as f64 / n_q as f64).collect()
}

fn hamiltonian(depth: f64, phase: f64, q: f64, n_pw: usize) -> DMatrix<C64> {
    let half = (n_pw as i64 - 1) / 2;
    let coupling = C64::from_polar(-0.5 * depth, phase);
    let mut h = DMatrix::zeros(n_pw, n_pw);
    for r in 0..n_pw {
        let k = q + (r as i64 - half) as f64;
        h[(r, r)] = C64::new(4.0 * k * k, 0.0);
        if r + 1 < n_pw {
            h[(r + 1, r)] = coupling;
            h[(r, r + 1)] = coupling.conj();
        }
    }
    h
}

/// Sorted eigenpairs with each state's phase fixed so that it is real and
/// positive at the well center `z_c`.
fn diagonalize(depth: f64, phase: f64, q: f64, n_pw: usize, z_c: f64) -> (Vec<f64>, DMatrix<C64>) {
    let half = (n_pw as i64 - 1) / 2;
    let eig = SymmetricEigen::new(hamiltonian(depth, phase, q, n_pw));
    let mut order: Vec<usize> = (0..n_pw).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut states = DMatrix::zeros(n_pw, n_pw);
    for (n, &i) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(i);
        let at_center: C64 = col
            .iter()
            .enumerate()
            .map(|(r, c)| c * C64::cis(TAU * (q + (r as i64 - half) as f64) * z_c))
            .sum();
        let gauge = if at_center.norm() > 1e-12 {
            at_center.conj() / at_center.norm()
        } else {
            // odd states vanish at the center; use the dominant plane wave
            let big = col.iter().cloned().fold(C64::new(0.0, 0.0), |acc, c| {
                if c.norm() > acc.norm() {
                    c
                } else {
                    acc
                }
            });
            big.conj() / big.norm()
        };
        let norm = col.norm();
        for r in 0..n_pw {
            states[(r, n)] = col[r] * gauge / norm;
        }
    }
    (energies, states)
}

/// Diagonalizes `p^2/2m - V_s cos(2 pi z + delta_s)` in a truncated
/// plane-wave basis at every point of an `n_q` grid over the Brillouin zone.
///
/// Fails with [`Error::NotConverged`] when doubling the basis moves the lowest
/// band by more than `1e-10 E_R`.
pub fn band_structure(
    config: &LatticeConfig,
    spin: Spin,
    n_planewaves: usize,
    n_q: usize,
) -> Result<BlochSpectrum> {
    config.validate()?;
    if n_planewaves < 11 || n_planewaves % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "plane-wave count must be odd and at least 11, got {n_planewaves}"
        )));
    }
    if n_q < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least two quasimomentum points, got {n_q}"
        )));
    }
    let depth = config.depth(spin);
    let phase = config.phase(spin);
    let z_c = config.well_offset(spin);
    let q_grid = uniform_zone(n_q);

    let solved: Vec<(Vec<f64>, DMatrix<C64>)> = q_grid
        .par_iter()
        .map(|&q| diagonalize(depth, phase, q, n_planewaves, z_c))
        .collect();

    // convergence probe at the zone center and edge
    let larger = 2 * n_planewaves + 1;
    for &q in &[0.0, -0.5] {
        let small = diagonalize(depth, phase, q, n_planewaves, z_c).0[0];
        let big = diagonalize(depth, phase, q, larger, z_c).0[0];
        let shift = (small - big).abs();
        if shift > CONVERGENCE_TOL {
            return Err(Error::NotConverged { shift });
        }
    }

    let (bands, coeffs) = solved.into_iter().unzip();
    Ok(BlochSpectrum {
        spin,
        depth,
        phase,
        well_offset: z_c,
        q_grid,
        bands,
        coeffs,
    })
}
