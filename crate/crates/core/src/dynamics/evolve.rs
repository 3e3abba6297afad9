use nalgebra::{DMatrix, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use super::generator::{build_tb_generator, Boundary};
use super::linalg::{apply_expm_hermitian, expm2, expm_hermitian};
use super::pulse::{ControlSegment, Coupling, PulseSequence};
use super::state::SpinorState;
use crate::conventions::{DOWN, UP};
use crate::error::{Error, Result};
use crate::C64;

/// Geometry of the simulated chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chain {
    /// Infinite open chain, emulated by a window that grows as needed.
    Open,
    /// Ring of `n` sites labelled `0..n`; gradients are rejected.
    Ring(usize),
}

/// Tolerances of the open-chain window.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolveOptions {
    /// The window grows while an edge site holds more than this amplitude.
    pub pad_tol: f64,
    /// Edge amplitude tolerated once `max_sites` is reached.
    pub leakage_tol: f64,
    pub max_sites: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            pad_tol: 1e-12,
            leakage_tol: 1e-10,
            max_sites: 1024,
        }
    }
}

/// Applies `seq` to `state`.
pub fn evolve(state: &SpinorState, seq: &PulseSequence, chain: Chain) -> Result<SpinorState> {
    evolve_with(state, seq, chain, &EvolveOptions::default())
}

pub fn evolve_with(
    state: &SpinorState,
    seq: &PulseSequence,
    chain: Chain,
    opts: &EvolveOptions,
) -> Result<SpinorState> {
    let mut runner = Runner::new(state, chain)?;
    for seg in seq {
        runner.step(seg, opts)?;
    }
    Ok(runner.state())
}

/// The state before the first segment and after every segment.
pub fn evolve_trajectory(
    state: &SpinorState,
    seq: &PulseSequence,
    chain: Chain,
) -> Result<Vec<SpinorState>> {
    let opts = EvolveOptions::default();
    let mut runner = Runner::new(state, chain)?;
    let mut out = vec![runner.state()];
    for seg in seq {
        runner.step(seg, &opts)?;
        out.push(runner.state());
    }
    Ok(out)
}

/// Full propagator of `seq` on a fixed window, rows and columns ordered as
/// in [`site_index`](super::site_index).
pub fn propagator(
    seq: &PulseSequence,
    l_min: i64,
    l_max: i64,
    boundary: Boundary,
) -> Result<DMatrix<C64>> {
    let n = 2 * (l_max - l_min + 1).max(0) as usize;
    let mut u = DMatrix::identity(n, n);
    for seg in seq {
        let h = build_tb_generator(seg, l_min, l_max, boundary)?;
        u = expm_hermitian(&h, seg.duration) * u;
    }
    Ok(u)
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

struct Runner {
    chain: Chain,
    l_min: i64,
    amps: Vec<[C64; 2]>,
}

impl Runner {
    fn new(state: &SpinorState, chain: Chain) -> Result<Self> {
        match chain {
            Chain::Open => Ok(Runner {
                chain,
                l_min: state.l_min(),
                amps: state.amps().to_vec(),
            }),
            Chain::Ring(n) => {
                if n == 0 || state.n_sites() > n {
                    return Err(Error::InvalidParameter(format!(
                        "state spans {} sites, ring has {n}",
                        state.n_sites()
                    )));
                }
                let mut amps = vec![[zero(); 2]; n];
                for (i, a) in state.amps().iter().enumerate() {
                    amps[(state.l_min() + i as i64).rem_euclid(n as i64) as usize] = *a;
                }
                Ok(Runner { chain, l_min: 0, amps })
            }
        }
    }

    fn state(&self) -> SpinorState {
        SpinorState::from_raw(self.l_min, self.amps.clone())
    }

    fn step(&mut self, seg: &ControlSegment, opts: &EvolveOptions) -> Result<()> {
        seg.validate()?;
        if seg.duration == 0.0 {
            return Ok(());
        }
        match (self.chain, seg.isolated_mode()) {
            (Chain::Ring(_), _) if seg.force != 0.0 => Err(Error::GradientNotAllowed(
                "a uniform force is incompatible with a ring".into(),
            )),
            (_, Some(mode)) => {
                self.step_pairs(seg, mode);
                Ok(())
            }
            (Chain::Ring(_), None) => {
                let n = self.amps.len() as i64;
                let h = build_tb_generator(seg, 0, n - 1, Boundary::Periodic)?;
                let v = self.state_vector(0, n - 1);
                self.load_vector(0, &apply_expm_hermitian(&h, seg.duration, &v));
                Ok(())
            }
            (Chain::Open, None) => self.step_window(seg, opts),
        }
    }

    fn state_vector(&self, lo: i64, hi: i64) -> nalgebra::DVector<C64> {
        nalgebra::DVector::from_fn(2 * (hi - lo + 1) as usize, |r, _| {
            let i = lo + (r / 2) as i64 - self.l_min;
            if i < 0 || i >= self.amps.len() as i64 {
                return zero();
            }
            let a = self.amps[i as usize];
            if r % 2 == 0 {
                a[DOWN]
            } else {
                a[UP]
            }
        })
    }

    fn load_vector(&mut self, lo: i64, v: &nalgebra::DVector<C64>) {
        self.l_min = lo;
        self.amps = (0..v.len() / 2)
            .map(|i| {
                let mut a = [zero(); 2];
                a[DOWN] = v[2 * i];
                a[UP] = v[2 * i + 1];
                a
            })
            .collect();
        if self.chain == Chain::Open {
            self.trim();
        }
    }

    fn trim(&mut self) {
        let s = SpinorState::from_raw(self.l_min, std::mem::take(&mut self.amps));
        self.l_min = s.l_min();
        self.amps = s.amps().to_vec();
    }

    /// Independent 2x2 evolution of every driven pair. Pair blocks differ
    /// only by the gradient phase `e^{-i F l tau}` of the down site `l`.
    fn step_pairs(&mut self, seg: &ControlSegment, mode: Coupling) {
        let (omega_r, omega_l) = seg.rates();
        let (omega, up_offset) = match mode {
            Coupling::L => (omega_l, seg.delta_l - 1.0),
            _ => (omega_r, seg.delta_l),
        };
        let x = C64::cis(seg.phi) * (-0.5 * omega);
        let h0 = Matrix2::new(
            C64::from(-0.5 * seg.delta + seg.force * up_offset),
            x,
            x.conj(),
            C64::from(0.5 * seg.delta),
        );
        let u0 = expm2(&h0, seg.duration);
        let tau_f = seg.force * seg.duration;
        let pair = |l: i64, v: Vector2<C64>| u0 * v * C64::cis(-tau_f * l as f64);

        match (mode, self.chain) {
            (Coupling::L, Chain::Open) => {
                let mut amps = Vec::with_capacity(self.amps.len() + 2);
                amps.push([zero(); 2]);
                amps.extend_from_slice(&self.amps);
                amps.push([zero(); 2]);
                let lo = self.l_min - 1;
                let old = amps.clone();
                for i in 1..amps.len() {
                    let v = Vector2::new(old[i - 1][UP], old[i][DOWN]);
                    let w = pair(lo + i as i64, v);
                    amps[i - 1][UP] = w[0];
                    amps[i][DOWN] = w[1];
                }
                self.l_min = lo;
                self.amps = amps;
                self.trim();
            }
            (Coupling::L, Chain::Ring(n)) => {
                let old = self.amps.clone();
                for i in 0..n {
                    let left = (i + n - 1) % n;
                    let v = Vector2::new(old[left][UP], old[i][DOWN]);
                    let w = pair(i as i64, v);
                    self.amps[left][UP] = w[0];
                    self.amps[i][DOWN] = w[1];
                }
            }
            _ => {
                let lo = self.l_min;
                for (i, a) in self.amps.iter_mut().enumerate() {
                    let w = pair(lo + i as i64, Vector2::new(a[UP], a[DOWN]));
                    a[UP] = w[0];
                    a[DOWN] = w[1];
                }
                if self.chain == Chain::Open {
                    self.trim();
                }
            }
        }
    }

    fn step_window(&mut self, seg: &ControlSegment, opts: &EvolveOptions) -> Result<()> {
        let (omega_r, omega_l) = seg.rates();
        let lo0 = self.l_min;
        let hi0 = self.l_min + self.amps.len() as i64 - 1;
        let span = hi0 - lo0 + 1;
        let room = ((opts.max_sites as i64 - span) / 2).max(0);
        let mut pad = (4 + (0.75 * (omega_r.abs() + omega_l.abs()) * seg.duration).ceil() as i64).min(room);
        loop {
            let (lo, hi) = (lo0 - pad, hi0 + pad);
            let sites = (hi - lo + 1) as usize;
            let h = build_tb_generator(seg, lo, hi, Boundary::Open)?;
            let v = apply_expm_hermitian(&h, seg.duration, &self.state_vector(lo, hi));
            let n = v.len();
            let edge = [v[0], v[1], v[n - 2], v[n - 1]]
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            let full = pad + 2 > room;
            if edge <= opts.pad_tol || (full && edge <= opts.leakage_tol) {
                self.load_vector(lo, &v);
                return Ok(());
            }
            if full {
                return Err(Error::Leakage {
                    amplitude: edge,
                    sites,
                });
            }
            pad += 2;
        }
    }
}
