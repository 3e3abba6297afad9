//! Scalar tight-binding chain `H = sum_l (Omega/2)(|l+1><l| + h.c.) + F l`
//! under piecewise-constant hopping and force, with its closed-form
//! propagator `U |q> = e^{-i a cos(2 pi q - b)} |q - eta / 2 pi>`.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::evolve::Chain;
use super::linalg::apply_expm_hermitian;
use crate::error::{Error, Result};
use crate::C64;

pub const SCALAR_SCHEDULE_SCHEMA: &str = "spinlat.scalar-schedule.v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarSegment {
    pub duration: f64,
    pub hopping: f64,
    pub force: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScalarScheduleRecord", into = "ScalarScheduleRecord")]
pub struct ScalarSchedule {
    pub segments: Vec<ScalarSegment>,
}

impl ScalarSchedule {
    pub fn new(segments: Vec<ScalarSegment>) -> Self {
        ScalarSchedule { segments }
    }

    pub fn validate(&self) -> Result<()> {
        for s in &self.segments {
            if ![s.duration, s.hopping, s.force].iter().all(|x| x.is_finite()) || s.duration < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "bad scalar segment {s:?}"
                )));
            }
        }
        Ok(())
    }

    pub fn has_force(&self) -> bool {
        self.segments.iter().any(|s| s.force != 0.0)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarScheduleRecord {
    schema: String,
    segments: Vec<ScalarSegment>,
}

impl TryFrom<ScalarScheduleRecord> for ScalarSchedule {
    type Error = Error;

    fn try_from(r: ScalarScheduleRecord) -> Result<Self> {
        if r.schema != SCALAR_SCHEDULE_SCHEMA {
            return Err(Error::Schema(format!(
                "expected schema {SCALAR_SCHEDULE_SCHEMA}, found {}",
                r.schema
            )));
        }
        let s = ScalarSchedule { segments: r.segments };
        s.validate()?;
        Ok(s)
    }
}

impl From<ScalarSchedule> for ScalarScheduleRecord {
    fn from(s: ScalarSchedule) -> Self {
        ScalarScheduleRecord {
            schema: SCALAR_SCHEDULE_SCHEMA.into(),
            segments: s.segments,
        }
    }
}

/// Closed-form propagator data: `a e^{i b} = int Omega(t) e^{i eta(t)} dt`
/// and the final `eta = int F dt`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HnPropagator {
    pub a: f64,
    pub b: f64,
    pub eta: f64,
}

impl HnPropagator {
    /// Phase acquired by `|q>`.
    pub fn phase(&self, q: f64) -> C64 {
        C64::cis(-self.a * (TAU * q - self.b).cos())
    }

    /// Amplitude of the evolved site-0 state at output quasimomentum `q`.
    pub fn output_amplitude(&self, q: f64) -> C64 {
        self.phase(q + self.q_shift())
    }

    pub fn q_shift(&self) -> f64 {
        self.eta / TAU
    }
}

/// `(e^{ix} - 1) / (ix)`.
fn phase_average(x: f64) -> C64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        C64::new(1.0 - x2 / 6.0 + x2 * x2 / 120.0, x / 2.0 - x * x2 / 24.0)
    } else {
        (C64::cis(x) - 1.0) / C64::new(0.0, x)
    }
}

pub fn hn_propagator(schedule: &ScalarSchedule) -> HnPropagator {
    let mut eta = 0.0;
    let mut z = C64::new(0.0, 0.0);
    for s in &schedule.segments {
        z += C64::cis(eta) * s.hopping * s.duration * phase_average(s.force * s.duration);
        eta += s.force * s.duration;
    }
    HnPropagator {
        a: z.norm(),
        b: z.arg(),
        eta,
    }
}

fn scalar_generator(seg: &ScalarSegment, l_min: i64, n: usize, periodic: bool) -> DMatrix<C64> {
    let mut h = DMatrix::zeros(n, n);
    let t = C64::from(0.5 * seg.hopping);
    for i in 0..n {
        h[(i, i)] = C64::from(seg.force * (l_min + i as i64) as f64);
        if i + 1 < n {
            h[(i + 1, i)] += t;
            h[(i, i + 1)] += t;
        }
    }
    if periodic && n > 1 {
        h[(0, n - 1)] += t;
        h[(n - 1, 0)] += t;
    }
    h
}

/// Numerically propagated site-0 state, as `(l_min, amplitudes)`.
pub fn scalar_chain_evolve(schedule: &ScalarSchedule, chain: Chain) -> Result<(i64, Vec<C64>)> {
    schedule.validate()?;
    match chain {
        Chain::Ring(n) => {
            if n == 0 {
                return Err(Error::InvalidParameter("empty ring".into()));
            }
            if schedule.has_force() {
                return Err(Error::GradientNotAllowed(
                    "a uniform force is incompatible with a ring".into(),
                ));
            }
            let mut psi = DVector::zeros(n);
            psi[0] = C64::from(1.0);
            for s in &schedule.segments {
                psi = apply_expm_hermitian(&scalar_generator(s, 0, n, true), s.duration, &psi);
            }
            Ok((0, psi.iter().copied().collect()))
        }
        Chain::Open => {
            let mut lo = 0i64;
            let mut psi = vec![C64::from(1.0)];
            for s in &schedule.segments {
                let mut pad = 8 + (1.5 * s.hopping.abs() * s.duration).ceil() as i64;
                loop {
                    let n = psi.len() + 2 * pad as usize;
                    let mut v = DVector::zeros(n);
                    for (i, c) in psi.iter().enumerate() {
                        v[i + pad as usize] = *c;
                    }
                    let out = apply_expm_hermitian(&scalar_generator(s, lo - pad, n, false), s.duration, &v);
                    let edge = out[0].norm().max(out[n - 1].norm());
                    if edge < 1e-14 {
                        let first = out.iter().position(|c| c.norm() > 1e-15).unwrap_or(0);
                        let last = out.iter().rposition(|c| c.norm() > 1e-15).unwrap_or(0);
                        lo = lo - pad + first as i64;
                        psi = out.iter().skip(first).take(last + 1 - first).copied().collect();
                        break;
                    }
                    if n > 2048 {
                        return Err(Error::Leakage { amplitude: edge, sites: n });
                    }
                    pad += 2;
                }
            }
            Ok((lo, psi))
        }
    }
}

/// Analytic and numeric output amplitudes of the site-0 state on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HnComparison {
    pub propagator: HnPropagator,
    pub q_grid: Vec<f64>,
    pub analytic: Vec<C64>,
    pub numeric: Vec<C64>,
    pub max_error: f64,
}

pub fn compare_hn(schedule: &ScalarSchedule, q_grid: &[f64], chain: Chain) -> Result<HnComparison> {
    if let Chain::Ring(n) = chain {
        if q_grid.iter().any(|q| ((q * n as f64) - (q * n as f64).round()).abs() > 1e-9) {
            return Err(Error::GridMismatch(format!(
                "quasimomenta must be multiples of 1/{n} on a {n}-site ring"
            )));
        }
    }
    let prop = hn_propagator(schedule);
    let (lo, amps) = scalar_chain_evolve(schedule, chain)?;
    let analytic: Vec<C64> = q_grid.iter().map(|&q| prop.output_amplitude(q)).collect();
    let numeric: Vec<C64> = q_grid
        .iter()
        .map(|&q| {
            amps.iter()
                .enumerate()
                .map(|(i, c)| c * C64::cis(-TAU * (lo + i as i64) as f64 * q))
                .sum()
        })
        .collect();
    let max_error = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(HnComparison {
        propagator: prop,
        q_grid: q_grid.to_vec(),
        analytic,
        numeric,
        max_error,
    })
}
