use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::rotation::Su2Rotation;
use crate::dynamics::{ControlSegment, Coupling, PulseSequence};
use crate::error::{Error, Result};
use crate::C64;

const ANGLE_TOL: f64 = 1e-12;

/// Resonant rotation about an equatorial axis:
/// `[[cos(theta/2), i sin(theta/2) e^{i phi}], [i sin(theta/2) e^{-i phi}, cos(theta/2)]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquatorialPulse {
    pub theta: f64,
    pub phi: f64,
}

impl EquatorialPulse {
    pub fn matrix(&self) -> Matrix2<C64> {
        let c = C64::from((0.5 * self.theta).cos());
        let s = C64::i() * (0.5 * self.theta).sin();
        Matrix2::new(c, s * C64::cis(self.phi), s * C64::cis(-self.phi), c)
    }
}

/// Writes `u` (up to a global phase) as at most three equatorial pulses, in
/// the order they are applied.
///
/// With `e^{-i gamma} u = [[a, -conj b], [b, conj a]]` the factorization is
/// `P(theta, phi) Z(zeta)` where `theta = 2 atan2(|b|, |a|)`, `zeta = arg a`,
/// `phi = zeta + pi/2 - arg b`, and `Z(zeta) = P(pi, zeta - pi) P(pi, 0)`.
pub fn decompose_su2(u: &Matrix2<C64>) -> Vec<EquatorialPulse> {
    let gamma = 0.5 * u.determinant().arg();
    let v = u * C64::cis(-gamma);
    let (mut a, mut b) = (v[(0, 0)], v[(1, 0)]);
    // the sign of an SU(2) element is a global phase as well
    if a.re < 0.0 {
        a = -a;
        b = -b;
    }
    if b.norm() <= ANGLE_TOL && a.arg().abs() <= ANGLE_TOL {
        return Vec::new();
    }
    if a.norm() <= ANGLE_TOL {
        // P(pi, phi + pi) = -P(pi, phi): pick the representative near zero
        let phi = wrap(FRAC_PI_2 - b.arg());
        let phi = if phi > FRAC_PI_2 + ANGLE_TOL {
            phi - PI
        } else if phi <= -FRAC_PI_2 + ANGLE_TOL {
            phi + PI
        } else {
            phi
        };
        return vec![EquatorialPulse { theta: PI, phi }];
    }
    let zeta = a.arg();
    let mut pulses = Vec::with_capacity(3);
    if zeta.abs() > ANGLE_TOL {
        pulses.push(EquatorialPulse { theta: PI, phi: 0.0 });
        pulses.push(EquatorialPulse {
            theta: PI,
            phi: wrap(zeta - PI),
        });
    }
    if b.norm() > ANGLE_TOL {
        pulses.push(EquatorialPulse {
            theta: 2.0 * b.norm().atan2(a.norm()),
            phi: wrap(zeta + FRAC_PI_2 - b.arg()),
        });
    }
    pulses
}

fn wrap(x: f64) -> f64 {
    (x + PI).rem_euclid(TAU) - PI
}

/// Uniform force applied throughout a compiled sequence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gradient {
    pub force: f64,
    pub delta_l: f64,
}

/// Turns abstract pair rotations into microwave segments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseCompiler {
    /// Largest bare microwave Rabi frequency.
    pub omega_max: f64,
    /// Franck-Condon weights of the right and left pairs: a pulse in `R` mode
    /// runs at `fc_right * Omega`, one in `L` mode at `fc_left * Omega`.
    pub fc_right: f64,
    pub fc_left: f64,
    /// Ratio of the suppressed to the driven pair rate; zero is ideal isolation.
    pub leakage: f64,
    pub gradient: Option<Gradient>,
    /// Forces every pulse to this duration instead of running at `omega_max`.
    pub fixed_duration: Option<f64>,
}

impl PulseCompiler {
    /// Perfect isolation, unit Franck-Condon weight, no gradient.
    pub fn ideal(omega_max: f64) -> Self {
        PulseCompiler {
            omega_max,
            fc_right: 1.0,
            fc_left: 1.0,
            leakage: 0.0,
            gradient: None,
            fixed_duration: None,
        }
    }

    pub fn with_leakage(mut self, leakage: f64) -> Self {
        self.leakage = leakage;
        self
    }

    pub fn with_gradient(mut self, force: f64, delta_l: f64) -> Self {
        self.gradient = Some(Gradient { force, delta_l });
        self
    }

    pub fn with_fc_weights(mut self, right: f64, left: f64) -> Self {
        self.fc_right = right;
        self.fc_left = left;
        self
    }

    fn weight(&self, mode: Coupling) -> f64 {
        match mode {
            Coupling::L => self.fc_left,
            _ => self.fc_right,
        }
    }

    pub fn with_fixed_duration(mut self, duration: f64) -> Self {
        self.fixed_duration = Some(duration);
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| {
            Err(Error::InvalidParameter(format!("{what} must be positive and finite, got {v}")))
        };
        if !(self.omega_max > 0.0 && self.omega_max.is_finite()) {
            return bad("omega_max", self.omega_max);
        }
        for w in [self.fc_right, self.fc_left] {
            if !(w > 0.0 && w.is_finite()) {
                return bad("Franck-Condon weight", w);
            }
        }
        if !(self.leakage >= 0.0 && self.leakage.is_finite()) {
            return Err(Error::InvalidParameter(format!("leakage must be non-negative, got {}", self.leakage)));
        }
        if let Some(t) = self.fixed_duration {
            if !(t > 0.0 && t.is_finite()) {
                return bad("fixed duration", t);
            }
        }
        if let Some(g) = self.gradient {
            if !(g.force != 0.0 && g.force.is_finite()) || !(0.0..1.0).contains(&g.delta_l) {
                return Err(Error::InvalidParameter(format!("bad gradient {g:?}")));
            }
            if self.leakage > 0.0 {
                return Err(Error::GradientNotAllowed(
                    "finite isolation drives both pairs, which a force would detune differently"
                        .into(),
                ));
            }
        }
        Ok(())
    }

    /// One segment per equatorial pulse of the decomposition.
    pub fn compile_rotation(&self, rot: &Su2Rotation) -> Result<Vec<ControlSegment>> {
        self.validate()?;
        decompose_su2(&rot.matrix)
            .into_iter()
            .map(|p| self.segment(p, rot.mode))
            .collect()
    }

    pub fn compile(&self, rotations: &[Su2Rotation]) -> Result<PulseSequence> {
        let mut seq = PulseSequence::default();
        for rot in rotations {
            for seg in self.compile_rotation(rot)? {
                seq.push(seg);
            }
        }
        Ok(seq)
    }

    fn segment(&self, pulse: EquatorialPulse, mode: Coupling) -> Result<ControlSegment> {
        let weight = self.weight(mode);
        let rate_max = self.omega_max * weight;
        let mut tau = self.fixed_duration.unwrap_or(pulse.theta / rate_max);
        if let Some(g) = self.gradient {
            let period = TAU / g.force.abs();
            let periods = (tau / period - 1e-9).ceil().max(1.0);
            tau = periods * period;
        }
        let rate = pulse.theta / tau;
        let bare = rate / weight;
        if bare > self.omega_max * (1.0 + 1e-12) {
            return Err(Error::RabiAboveLimit {
                required: bare,
                limit: self.omega_max,
            });
        }
        let mut seg = if self.leakage > 0.0 {
            let (r, l) = match mode {
                Coupling::L => (rate * self.leakage, rate),
                _ => (rate, rate * self.leakage),
            };
            let mut s = ControlSegment::both(r, l, pulse.phi, tau);
            s.omega = bare;
            s
        } else {
            ControlSegment::pulse(mode, rate, pulse.phi, tau)
        };
        if let Some(g) = self.gradient {
            let offset = if mode == Coupling::L { g.delta_l - 1.0 } else { g.delta_l };
            seg = seg.with_gradient(g.force, g.delta_l).with_detuning(g.force * offset);
        }
        Ok(seg)
    }
}

/// First-order infidelity from imperfect pair isolation: every pulse of area
/// `theta` on the driven pair also rotates the suppressed pair by
/// `leakage * theta`, costing at most `(leakage * theta / 2)^2` each.
pub fn isolation_infidelity_estimate(seq: &PulseSequence, leakage: f64) -> f64 {
    seq.iter()
        .map(|s| {
            let (r, l) = s.rates();
            let area = r.abs().max(l.abs()) * s.duration;
            (0.5 * leakage * area).powi(2)
        })
        .sum()
}

/// Compiles one rotation at `omega_max`, optionally under a uniform force with
/// `delta_l = 1/2`.
pub fn su2_to_pulses(rot: &Su2Rotation, omega_max: f64, with_gradient: Option<f64>) -> Result<Vec<ControlSegment>> {
    let mut c = PulseCompiler::ideal(omega_max);
    if let Some(f) = with_gradient {
        c = c.with_gradient(f, 0.5);
    }
    c.compile_rotation(rot)
}
