use std::f64::consts::TAU;

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use super::pulse::ControlSegment;
use crate::conventions::{DOWN, UP};
use crate::error::{Error, Result};
use crate::C64;

/// Boundary condition of a finite site window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

/// Row of `|l, spin>` in a window starting at `l_min`; down is even, up odd.
pub fn site_index(l: i64, up: bool, l_min: i64) -> usize {
    2 * (l - l_min) as usize + usize::from(up)
}

/// Tight-binding generator of `segment` on sites `l_min..=l_max`.
///
/// Site labels are absolute, so the gradient term `F l` depends on where the
/// window sits. With a periodic boundary the left coupling of `l_min` wraps
/// to the up state of `l_max`.
pub fn build_tb_generator(
    segment: &ControlSegment,
    l_min: i64,
    l_max: i64,
    boundary: Boundary,
) -> Result<DMatrix<C64>> {
    segment.validate()?;
    if l_max < l_min {
        return Err(Error::InvalidParameter(format!(
            "empty site range {l_min}..={l_max}"
        )));
    }
    if boundary == Boundary::Periodic && segment.force != 0.0 {
        return Err(Error::GradientNotAllowed(
            "a uniform force is incompatible with a periodic boundary".into(),
        ));
    }
    let n = (l_max - l_min + 1) as usize;
    let mut h = DMatrix::<C64>::zeros(2 * n, 2 * n);
    let (omega_r, omega_l) = segment.rates();
    let drive = C64::cis(segment.phi) * -0.5;
    let f = segment.force;
    for i in 0..n {
        let l = l_min + i as i64;
        let dn = 2 * i;
        let up = 2 * i + 1;
        h[(up, up)] += C64::from(-0.5 * segment.delta + f * (l as f64 + segment.delta_l));
        h[(dn, dn)] += C64::from(0.5 * segment.delta + f * l as f64);
        h[(up, dn)] += drive * omega_r;
        h[(dn, up)] += (drive * omega_r).conj();
        let left = if i > 0 {
            Some(2 * (i - 1) + 1)
        } else if boundary == Boundary::Periodic {
            Some(2 * (n - 1) + 1)
        } else {
            None
        };
        if let Some(up_left) = left {
            h[(up_left, dn)] += drive * omega_l;
            h[(dn, up_left)] += (drive * omega_l).conj();
        }
    }
    Ok(h)
}

/// Bloch block of a gradient-free segment at quasimomentum `q`, in the
/// `(up, down)` basis. The force of `segment` is ignored: a gradient acts
/// through the [`GradientFrame`](super::GradientFrame).
pub fn bloch_generator(segment: &ControlSegment, q: f64) -> Matrix2<C64> {
    let (omega_r, omega_l) = segment.rates();
    let x = C64::cis(segment.phi) * (C64::from(omega_r) + C64::cis(TAU * q) * omega_l) * -0.5;
    let mut h = Matrix2::zeros();
    h[(UP, UP)] = C64::from(-0.5 * segment.delta);
    h[(DOWN, DOWN)] = C64::from(0.5 * segment.delta);
    h[(UP, DOWN)] = x;
    h[(DOWN, UP)] = x.conj();
    h
}
