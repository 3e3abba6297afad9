use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::conventions::{DOWN, UP};
use crate::dynamics::{Coupling, SpinorState};
use crate::error::{Error, Result};
use crate::model::Spin;
use crate::C64;

const UNITARITY_TOL: f64 = 1e-12;

/// A 2x2 rotation applied simultaneously to every pair of one coupling mode.
///
/// The matrix acts on `(up, down)`: in `R` mode on `(|l, up>, |l, down>)`, in
/// `L` mode on `(|l - 1, up>, |l, down>)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su2Rotation {
    pub matrix: Matrix2<C64>,
    pub mode: Coupling,
    /// Spin that the left-edge pair is rotated into, for protocol steps.
    pub edge: Option<Spin>,
}

impl Su2Rotation {
    pub fn new(matrix: Matrix2<C64>, mode: Coupling) -> Result<Self> {
        if mode == Coupling::Both {
            return Err(Error::InvalidParameter(
                "a rotation drives exactly one pair mode".into(),
            ));
        }
        let err = (matrix.adjoint() * matrix - Matrix2::identity())
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        if err > UNITARITY_TOL {
            return Err(Error::InvalidParameter(format!(
                "rotation is not unitary (error {err:.3e})"
            )));
        }
        Ok(Su2Rotation {
            matrix,
            mode,
            edge: None,
        })
    }

    pub fn identity(mode: Coupling) -> Self {
        Su2Rotation {
            matrix: Matrix2::identity(),
            mode,
            edge: None,
        }
    }

    pub fn inverse(&self) -> Self {
        Su2Rotation {
            matrix: self.matrix.adjoint(),
            mode: self.mode,
            edge: None,
        }
    }

    /// `gamma` with `det = e^{2 i gamma}`.
    pub fn global_phase(&self) -> f64 {
        0.5 * self.matrix.determinant().arg()
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        (self.matrix - Matrix2::identity())
            .iter()
            .all(|x| x.norm() <= tol)
    }

    /// Applies the rotation to every pair in the ideal isolated-pair model.
    pub fn apply(&self, state: &SpinorState) -> SpinorState {
        let m = &self.matrix;
        let mut amps: Vec<[C64; 2]>;
        let l_min;
        match self.mode {
            Coupling::L => {
                l_min = state.l_min() - 1;
                amps = Vec::with_capacity(state.n_sites() + 2);
                amps.push([C64::new(0.0, 0.0); 2]);
                amps.extend_from_slice(state.amps());
                amps.push([C64::new(0.0, 0.0); 2]);
                let old = amps.clone();
                for i in 1..amps.len() {
                    let (u, d) = (old[i - 1][UP], old[i][DOWN]);
                    amps[i - 1][UP] = m[(UP, UP)] * u + m[(UP, DOWN)] * d;
                    amps[i][DOWN] = m[(DOWN, UP)] * u + m[(DOWN, DOWN)] * d;
                }
            }
            _ => {
                l_min = state.l_min();
                amps = state
                    .amps()
                    .iter()
                    .map(|a| {
                        let mut b = [C64::new(0.0, 0.0); 2];
                        b[UP] = m[(UP, UP)] * a[UP] + m[(UP, DOWN)] * a[DOWN];
                        b[DOWN] = m[(DOWN, UP)] * a[UP] + m[(DOWN, DOWN)] * a[DOWN];
                        b
                    })
                    .collect();
            }
        }
        SpinorState::from_raw(l_min, amps)
    }
}

/// Applies rotations in order.
pub fn apply_rotations(rotations: &[Su2Rotation], state: &SpinorState) -> SpinorState {
    rotations.iter().fold(state.clone(), |s, r| r.apply(&s))
}

/// SU(2) matrix sending the pair content `(up, down) = (a, b)` entirely into
/// `target`, with the same norm.
pub fn pair_rotation(a: C64, b: C64, target: Spin) -> Matrix2<C64> {
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let i = C64::i();
    match target {
        Spin::Up => Matrix2::new(-i * a.conj(), -i * b.conj(), -i * b, i * a) / C64::from(n),
        Spin::Down => Matrix2::new(b, -a, a.conj(), b.conj()) / C64::from(n),
    }
}

/// SU(2) matrix sending `from` to `phase * to` for opposite spins.
pub fn flip(from: Spin, phase: C64) -> Matrix2<C64> {
    let z = C64::new(0.0, 0.0);
    match from {
        // up -> phase * down
        Spin::Up => Matrix2::new(z, -phase.conj(), phase, z),
        // down -> phase * up
        Spin::Down => Matrix2::new(z, phase, -phase.conj(), z),
    }
}
