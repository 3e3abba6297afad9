use serde::{Deserialize, Serialize};

use crate::dynamics::{SpinorState, NORM_TOLERANCE};
use crate::error::{Error, Result};
use crate::model::Spin;
use crate::C64;

/// Default tolerance on translated overlaps.
pub const REACHABILITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranslationOverlap {
    pub j: i64,
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
}

/// Translated self-overlaps of a state and the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReachabilityReport {
    pub reachable: bool,
    pub tol: f64,
    /// `sum_{l,s} conj(c_{l,s}) c_{l+j,s}` for every `j` whose translated
    /// support overlaps the state, including `j = 0`.
    pub overlaps: Vec<TranslationOverlap>,
    pub worst_j: Option<i64>,
    pub worst_magnitude: f64,
}

impl ReachabilityReport {
    pub fn overlap(&self, j: i64) -> C64 {
        self.overlaps
            .iter()
            .find(|o| o.j == j)
            .map_or(C64::new(0.0, 0.0), |o| C64::new(o.re, o.im))
    }
}

/// `sum_{l,s} conj(c_{l,s}) c_{l+j,s}`.
pub fn translation_overlap(state: &SpinorState, j: i64) -> C64 {
    (state.l_min()..=state.l_max())
        .map(|l| {
            [Spin::Up, Spin::Down]
                .iter()
                .map(|&s| state.amp(l, s).conj() * state.amp(l + j, s))
                .sum::<C64>()
        })
        .sum()
}

/// A state can be prepared from a single Wannier ket iff it is orthogonal to
/// all of its nonzero lattice translations. A uniform force does not change
/// this set, so none is accepted.
pub fn reachability_check(state: &SpinorState, tol: f64) -> Result<ReachabilityReport> {
    let n = state.norm_sqr();
    if (n - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm_sqr: n });
    }
    let span = state.l_max() - state.l_min();
    let overlaps: Vec<TranslationOverlap> = (-span..=span)
        .map(|j| {
            let z = translation_overlap(state, j);
            TranslationOverlap {
                j,
                re: z.re,
                im: z.im,
                magnitude: z.norm(),
            }
        })
        .collect();
    let worst = overlaps
        .iter()
        .filter(|o| o.j > 0)
        .max_by(|a, b| a.magnitude.total_cmp(&b.magnitude));
    let worst_magnitude = worst.map_or(0.0, |o| o.magnitude);
    Ok(ReachabilityReport {
        reachable: worst_magnitude < tol,
        tol,
        worst_j: worst.map(|o| o.j),
        worst_magnitude,
        overlaps,
    })
}
