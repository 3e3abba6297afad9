use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use super::bands::BlochSpectrum;
use super::lattice::{LatticeConfig, Spin};
use crate::error::{Error, Result};
use crate::C64;

/// Sampling density of Wannier grids.
pub const POINTS_PER_PERIOD: usize = 64;
/// Norm allowed outside three periods of the center before a function counts
/// as poorly localized.
pub const TAIL_WARNING: f64 = 1e-6;
const HALF_SPAN: i64 = 4;

/// A Wannier function sampled on a uniform real-space grid.
#[derive(Clone, Debug)]
pub struct WannierFunction {
    pub grid: Vec<f64>,
    pub values: Vec<C64>,
    pub site: i64,
    pub spin: Spin,
    pub band: usize,
    pub center: f64,
    /// Norm carried by grid points more than three periods from `center`.
    pub tail_weight: f64,
}

impl WannierFunction {
    pub fn spacing(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    pub fn norm_sqr(&self) -> f64 {
        trapezoid(self.spacing(), self.values.iter().map(|v| v.norm_sqr()))
    }

    /// `<self|other>` by the trapezoidal rule on the shared grid.
    pub fn overlap(&self, other: &WannierFunction) -> Result<C64> {
        if self.grid.len() != other.grid.len()
            || self
                .grid
                .iter()
                .zip(&other.grid)
                .any(|(a, b)| (a - b).abs() > 1e-12)
        {
            return Err(Error::GridMismatch(format!(
                "{} points from {} vs {} points from {}",
                self.grid.len(),
                self.grid.first().unwrap_or(&f64::NAN),
                other.grid.len(),
                other.grid.first().unwrap_or(&f64::NAN)
            )));
        }
        let h = self.spacing();
        let terms: Vec<C64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .collect();
        let n = terms.len();
        let inner: C64 = terms.iter().sum();
        Ok((inner - 0.5 * (terms[0] + terms[n - 1])) * h)
    }

    /// Largest imaginary part relative to the largest magnitude.
    pub fn imaginary_fraction(&self) -> f64 {
        let max = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let imag = self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        imag / max
    }

    pub fn mean_position(&self) -> f64 {
        let h = self.spacing();
        trapezoid(
            h,
            self.grid.iter().zip(&self.values).map(|(z, v)| z * v.norm_sqr()),
        ) / self.norm_sqr()
    }

    /// Standard deviation of `|w(z)|^2`, in periods.
    pub fn rms_width(&self) -> f64 {
        let h = self.spacing();
        let mean = self.mean_position();
        let var = trapezoid(
            h,
            self.grid
                .iter()
                .zip(&self.values)
                .map(|(z, v)| (z - mean).powi(2) * v.norm_sqr()),
        ) / self.norm_sqr();
        var.sqrt()
    }

    pub fn is_localized(&self) -> bool {
        self.tail_weight <= TAIL_WARNING
    }
}

fn trapezoid(h: f64, values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    let n = v.len();
    if n < 2 {
        return 0.0;
    }
    (v.iter().sum::<f64>() - 0.5 * (v[0] + v[n - 1])) * h
}

fn uniform_grid(lo: i64, hi: i64) -> Vec<f64> {
    let n = ((hi - lo) as usize) * POINTS_PER_PERIOD;
    (0..=n)
        .map(|i| lo as f64 + i as f64 / POINTS_PER_PERIOD as f64)
        .collect()
}

/// Wannier function of `band` at `site`, sampled over four periods on each
/// side of its home cell.
pub fn wannier_state(spectrum: &BlochSpectrum, band: usize, site: i64) -> Result<WannierFunction> {
    let center = site as f64 + spectrum.well_offset;
    let cell = center.floor() as i64;
    wannier_on_grid(spectrum, band, site, &uniform_grid(cell - HALF_SPAN, cell + HALF_SPAN + 1))
}

/// Discrete Brillouin-zone sum `w_l(z) = (1/n_q) sum_q e^{-i 2 pi l q} psi_q(z)`
/// evaluated at the given points.
pub fn wannier_on_grid(
    spectrum: &BlochSpectrum,
    band: usize,
    site: i64,
    grid: &[f64],
) -> Result<WannierFunction> {
    if band >= spectrum.n_bands() {
        return Err(Error::InvalidParameter(format!(
            "band {band} not computed (have {})",
            spectrum.n_bands()
        )));
    }
    if grid.len() < 2 {
        return Err(Error::InvalidParameter("grid needs at least two points".into()));
    }
    let n_pw = spectrum.n_planewaves();
    let half = (n_pw as i64 - 1) / 2;
    let n_q = spectrum.n_q() as f64;
    let l = site as f64;
    let values: Vec<C64> = grid
        .par_iter()
        .map(|&z| {
            let step = C64::cis(TAU * z);
            let mut harmonics = Vec::with_capacity(n_pw);
            let mut h = C64::cis(-TAU * half as f64 * z);
            for _ in 0..n_pw {
                harmonics.push(h);
                h *= step;
            }
            let mut acc = C64::new(0.0, 0.0);
            for (j, &q) in spectrum.q_grid.iter().enumerate() {
                let col = spectrum.coeffs[j].column(band);
                let cell: C64 = col.iter().zip(&harmonics).map(|(c, e)| c * e).sum();
                acc += C64::cis(TAU * q * (z - l)) * cell;
            }
            acc / n_q
        })
        .collect();
    let center = l + spectrum.well_offset;
    let h = grid[1] - grid[0];
    let tail_weight = trapezoid(
        h,
        grid.iter()
            .zip(&values)
            .map(|(z, v)| if (z - center).abs() > 3.0 { v.norm_sqr() } else { 0.0 }),
    );
    Ok(WannierFunction {
        grid: grid.to_vec(),
        values,
        site,
        spin: spectrum.spin,
        band,
        center,
        tail_weight,
    })
}

/// Franck-Condon weights of the two microwave pair couplings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FranckCondon {
    /// `<phi^up_l | phi^down_l>`, i.e. `Omega_R / Omega_uw`.
    pub right: C64,
    /// `<phi^up_{l-1} | phi^down_l>`, i.e. `Omega_L / Omega_uw`.
    pub left: C64,
}

impl FranckCondon {
    /// `|Omega_L / Omega_R|`.
    pub fn ratio(&self) -> f64 {
        self.left.norm() / self.right.norm()
    }
}

/// Ground-band overlaps between the spin-up and spin-down Wannier functions
/// on a common grid.
pub fn franck_condon(
    config: &LatticeConfig,
    up: &BlochSpectrum,
    down: &BlochSpectrum,
) -> Result<FranckCondon> {
    if up.spin != Spin::Up || down.spin != Spin::Down {
        return Err(Error::InvalidParameter(
            "expected a spin-up and a spin-down spectrum".into(),
        ));
    }
    for s in [up, down] {
        if (s.depth - config.depth(s.spin)).abs() > 1e-12
            || (s.phase - config.phase(s.spin)).abs() > 1e-12
        {
            return Err(Error::InvalidParameter(format!(
                "{} spectrum was computed for a different lattice",
                s.spin
            )));
        }
    }
    if up.q_grid.len() != down.q_grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} vs {} quasimomentum points",
            up.q_grid.len(),
            down.q_grid.len()
        )));
    }
    let lo = (up.well_offset - 1.0).min(down.well_offset).floor() as i64 - HALF_SPAN;
    let hi = up.well_offset.max(down.well_offset).ceil() as i64 + HALF_SPAN;
    let grid = uniform_grid(lo, hi);
    let down0 = wannier_on_grid(down, 0, 0, &grid)?;
    let up0 = wannier_on_grid(up, 0, 0, &grid)?;
    let up_left = wannier_on_grid(up, 0, -1, &grid)?;
    Ok(FranckCondon {
        right: up0.overlap(&down0)?,
        left: up_left.overlap(&down0)?,
    })
}

/// Standard deviation (in periods) of the harmonic ground-state density for
/// trap frequency `hbar_omega`: `k_L sigma = sqrt(E_R / hbar omega)`.
pub fn harmonic_density_width(hbar_omega: f64) -> f64 {
    (1.0 / hbar_omega).sqrt() / PI
}

fn gaussian_ratio(d_left: f64, d_right: f64, hbar_omega: f64) -> f64 {
    // overlap of displaced ground states: exp(-(k_L d)^2 hbar omega / 8 E_R)
    let kl = PI * d_left;
    let kr = PI * d_right;
    ((kr * kr - kl * kl) * hbar_omega / 8.0).exp()
}

/// Harmonic-oscillator estimate of `|Omega_L / Omega_R|` for the default
/// cesium pseudo-spin at angle `theta` and trap frequency `hbar_omega`.
pub fn gaussian_fc_ratio(theta: f64, hbar_omega: f64) -> Result<f64> {
    if !(hbar_omega > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "trap frequency must be positive, got {hbar_omega}"
        )));
    }
    let config = LatticeConfig::new(1.0, theta)?;
    let d_right = config.well_offset(Spin::Up) - config.well_offset(Spin::Down);
    Ok(gaussian_ratio(1.0 - d_right, d_right, hbar_omega))
}

/// Same estimate using the lattice's own well separations and trap frequency.
pub fn gaussian_fc_ratio_for(config: &LatticeConfig) -> f64 {
    let d_right = config.well_offset(Spin::Up) - config.well_offset(Spin::Down);
    gaussian_ratio(1.0 - d_right, d_right, config.trap_frequency(Spin::Up))
}
