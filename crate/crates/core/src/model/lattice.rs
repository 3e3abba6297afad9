use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pseudo-spin label: `Up` is `|F=4, m=3>`, `Down` is `|F=3, m=3>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Down,
    Up,
}

impl Spin {
    pub fn flipped(self) -> Spin {
        match self {
            Spin::Down => Spin::Up,
            Spin::Up => Spin::Down,
        }
    }

    /// Index into `(up, down)` ordered 2-vectors.
    pub fn index(self) -> usize {
        match self {
            Spin::Up => crate::conventions::UP,
            Spin::Down => crate::conventions::DOWN,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spin::Down => f.write_str("down"),
            Spin::Up => f.write_str("up"),
        }
    }
}

/// Physical parameters of the lin-theta-lin lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    /// lin-parallel-lin depth in `E_R`.
    pub v0: f64,
    /// Polarization angle in radians.
    pub theta: f64,
    pub g_f_up: f64,
    pub g_f_down: f64,
    pub m_f: f64,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig {
            v0: 50.0,
            theta: PI / 2.0,
            g_f_up: 0.25,
            g_f_down: -0.25,
            m_f: 3.0,
        }
    }
}

impl LatticeConfig {
    pub fn new(v0: f64, theta: f64) -> Result<Self> {
        let config = LatticeConfig {
            v0,
            theta,
            ..Default::default()
        };
        config.validate()?;
        Ok(config)
    }

    /// Lattice whose spin-up wells have harmonic frequency `hbar_omega` (in `E_R`).
    pub fn with_trap_frequency(theta: f64, hbar_omega: f64) -> Result<Self> {
        if !(hbar_omega > 0.0) || !hbar_omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "trap frequency must be positive, got {hbar_omega}"
            )));
        }
        let mut config = LatticeConfig {
            v0: 1.0,
            theta,
            ..Default::default()
        };
        config.validate()?;
        let scale = config.depth(Spin::Up);
        if scale <= 0.0 {
            return Err(Error::InvalidParameter(
                "effective depth vanishes at this angle".into(),
            ));
        }
        config.v0 = hbar_omega * hbar_omega / 8.0 / scale;
        Ok(config)
    }

    /// A depth of zero is accepted (free particle).
    pub fn validate(&self) -> Result<()> {
        if !(self.v0 >= 0.0) || !self.v0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lattice depth must be non-negative, got {}",
                self.v0
            )));
        }
        if !(0.0..=PI).contains(&self.theta) {
            return Err(Error::InvalidParameter(format!(
                "polarization angle must lie in [0, pi], got {}",
                self.theta
            )));
        }
        if !(self.g_f_up.is_finite() && self.g_f_down.is_finite() && self.m_f.is_finite()) {
            return Err(Error::InvalidParameter("non-finite g-factor or m_F".into()));
        }
        Ok(())
    }

    fn g_m_half(&self, spin: Spin) -> f64 {
        let g = match spin {
            Spin::Up => self.g_f_up,
            Spin::Down => self.g_f_down,
        };
        0.5 * g * self.m_f
    }

    /// `V_{F,m}` in `E_R`.
    pub fn depth(&self, spin: Spin) -> f64 {
        let (s, c) = self.theta.sin_cos();
        let gm = self.g_m_half(spin);
        self.v0 * (c * c + gm * gm * s * s).sqrt()
    }

    /// `delta_{F,m}` in radians, continuous in `theta` over `[0, pi]`.
    pub fn phase(&self, spin: Spin) -> f64 {
        let (s, c) = self.theta.sin_cos();
        (self.g_m_half(spin) * s).atan2(c)
    }

    /// Harmonic frequency `sqrt(8 V)` of the wells of `spin`.
    pub fn trap_frequency(&self, spin: Spin) -> f64 {
        (8.0 * self.depth(spin)).sqrt()
    }

    /// Position (in periods) of the well labelled site 0 for `spin`.
    pub fn well_offset(&self, spin: Spin) -> f64 {
        let down = (-self.phase(Spin::Down) / TAU).rem_euclid(1.0);
        match spin {
            Spin::Down => down,
            Spin::Up => {
                let up = (-self.phase(Spin::Up) / TAU).rem_euclid(1.0);
                if up <= down + 1e-12 {
                    up + 1.0
                } else {
                    up
                }
            }
        }
    }
}

/// Depth and phase of the light-shift lattice seen by `spin`.
pub fn lightshift_params(config: &LatticeConfig, spin: Spin) -> (f64, f64) {
    (config.depth(spin), config.phase(spin))
}

/// Microwave-dressed potentials sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct AdiabaticCurves {
    pub z: Vec<f64>,
    pub v_plus: Vec<f64>,
    pub v_minus: Vec<f64>,
}

/// Upper and lower dressed potentials for positions `z` (in periods), using
/// the spin-up depth and phase as the common lattice parameters.
pub fn adiabatic_potentials(
    z: &[f64],
    config: &LatticeConfig,
    delta_uw: f64,
    omega_uw: f64,
) -> Result<AdiabaticCurves> {
    if !(omega_uw >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Rabi frequency must be non-negative, got {omega_uw}"
        )));
    }
    let (v, delta0) = lightshift_params(config, Spin::Up);
    let (sd, cd) = delta0.sin_cos();
    let mut v_plus = Vec::with_capacity(z.len());
    let mut v_minus = Vec::with_capacity(z.len());
    for &zi in z {
        let (s, c) = (TAU * zi).sin_cos();
        let mean = -v * cd * c;
        let split = 0.5 * ((2.0 * v * sd * s - delta_uw).powi(2) + omega_uw * omega_uw).sqrt();
        v_plus.push(mean + split);
        v_minus.push(mean - split);
    }
    Ok(AdiabaticCurves {
        z: z.to_vec(),
        v_plus,
        v_minus,
    })
}
