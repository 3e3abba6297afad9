use std::f64::consts::TAU;

use nalgebra::{DVector, Vector2};
use serde::{Deserialize, Serialize};

use crate::conventions::{DOWN, UP};
use crate::error::{Error, Result};
use crate::model::Spin;
use crate::C64;

/// Amplitudes below this are dropped from the edges of a state.
pub const TRIM_THRESHOLD: f64 = 1e-12;
/// Allowed deviation of the squared norm from one.
pub const NORM_TOLERANCE: f64 = 1e-10;

pub const SPINOR_STATE_SCHEMA: &str = "spinlat.spinor-state.v1";

/// Spinor wavepacket `sum_l c_{l,up} |l, up> + c_{l,down} |l, down>` on a finite
/// range of sites.
///
/// `amps[i]` belongs to site `l_min + i` and is indexed by
/// [`UP`](crate::conventions::UP) / [`DOWN`](crate::conventions::DOWN).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpinorStateRecord", into = "SpinorStateRecord")]
pub struct SpinorState {
    l_min: i64,
    amps: Vec<[C64; 2]>,
}

impl SpinorState {
    /// Normalized state; edges below [`TRIM_THRESHOLD`] are trimmed.
    pub fn new(l_min: i64, amps: Vec<[C64; 2]>) -> Result<Self> {
        let state = Self::from_raw(l_min, amps);
        let n = state.norm_sqr();
        if !n.is_finite() || (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        Ok(state)
    }

    /// Rescales to unit norm before validating.
    pub fn normalized(l_min: i64, amps: Vec<[C64; 2]>) -> Result<Self> {
        let n = amps
            .iter()
            .map(|a| a[0].norm_sqr() + a[1].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotNormalized { norm_sqr: n * n });
        }
        Self::new(l_min, amps.into_iter().map(|a| [a[0] / n, a[1] / n]).collect())
    }

    pub fn basis(l: i64, spin: Spin) -> Self {
        let mut a = [C64::new(0.0, 0.0); 2];
        a[spin.index()] = C64::new(1.0, 0.0);
        SpinorState { l_min: l, amps: vec![a] }
    }

    /// Trims but does not check the norm.
    pub(crate) fn from_raw(l_min: i64, amps: Vec<[C64; 2]>) -> Self {
        let mut s = SpinorState { l_min, amps };
        s.trim(TRIM_THRESHOLD);
        s
    }

    fn trim(&mut self, tol: f64) {
        let big = |a: &[C64; 2]| a[0].norm() > tol || a[1].norm() > tol;
        let Some(first) = self.amps.iter().position(big) else {
            self.amps.truncate(1);
            return;
        };
        let last = self.amps.iter().rposition(big).unwrap();
        self.amps.truncate(last + 1);
        self.amps.drain(..first);
        self.l_min += first as i64;
    }

    pub fn l_min(&self) -> i64 {
        self.l_min
    }

    pub fn l_max(&self) -> i64 {
        self.l_min + self.amps.len() as i64 - 1
    }

    pub fn n_sites(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[[C64; 2]] {
        &self.amps
    }

    /// `c_{l,s}`, zero outside the stored range.
    pub fn amp(&self, l: i64, spin: Spin) -> C64 {
        let i = l - self.l_min;
        if i < 0 || i >= self.amps.len() as i64 {
            return C64::new(0.0, 0.0);
        }
        self.amps[i as usize][spin.index()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps
            .iter()
            .map(|a| a[0].norm_sqr() + a[1].norm_sqr())
            .sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &SpinorState) -> C64 {
        let lo = self.l_min.max(other.l_min);
        let hi = self.l_max().min(other.l_max());
        (lo..=hi)
            .map(|l| {
                self.amp(l, Spin::Up).conj() * other.amp(l, Spin::Up)
                    + self.amp(l, Spin::Down).conj() * other.amp(l, Spin::Down)
            })
            .sum()
    }

    pub fn fidelity(&self, other: &SpinorState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// `T_j |psi>`: every amplitude moved `j` sites to the right.
    pub fn translated(&self, j: i64) -> SpinorState {
        SpinorState {
            l_min: self.l_min + j,
            amps: self.amps.clone(),
        }
    }

    /// Multiplies every amplitude by `e^{i phase}`.
    pub fn with_phase(&self, phase: f64) -> SpinorState {
        let z = C64::cis(phase);
        SpinorState {
            l_min: self.l_min,
            amps: self.amps.iter().map(|a| [a[0] * z, a[1] * z]).collect(),
        }
    }

    /// Occupied sub-well range `(k_min, k_max)` with `k = 2l` for down and
    /// `2l + 1` for up; amplitudes at or below `tol` count as empty.
    pub fn subwell_extent(&self, tol: f64) -> Option<(i64, i64)> {
        let mut ks = self.amps.iter().enumerate().flat_map(|(i, a)| {
            let l = self.l_min + i as i64;
            [(2 * l, a[DOWN]), (2 * l + 1, a[UP])]
        });
        let mut lo = None;
        let mut hi = None;
        for (k, c) in &mut ks {
            if c.norm() > tol {
                lo.get_or_insert(k);
                hi = Some(k);
            }
        }
        Some((lo?, hi?))
    }

    /// Populations `(l, |c_down|^2, |c_up|^2)`.
    pub fn populations(&self) -> Vec<(i64, f64, f64)> {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| (self.l_min + i as i64, a[DOWN].norm_sqr(), a[UP].norm_sqr()))
            .collect()
    }

    /// Largest single-ket population and its location.
    pub fn peak(&self) -> (i64, Spin, f64) {
        let mut best = (self.l_min, Spin::Down, -1.0);
        for (l, dn, up) in self.populations() {
            if dn > best.2 {
                best = (l, Spin::Down, dn);
            }
            if up > best.2 {
                best = (l, Spin::Up, up);
            }
        }
        best
    }

    /// Bloch components `(psi_up(q), psi_down(q))` with
    /// `psi_s(q) = sum_l c_{l,s} e^{-i 2 pi l q}`.
    pub fn bloch_components(&self, q: f64) -> Vector2<C64> {
        let mut v = Vector2::zeros();
        for (i, a) in self.amps.iter().enumerate() {
            let e = C64::cis(-TAU * (self.l_min + i as i64) as f64 * q);
            v[UP] += a[UP] * e;
            v[DOWN] += a[DOWN] * e;
        }
        v
    }

    /// Interleaved vector over sites `lo..=hi`: index `2(l - lo)` is down,
    /// `2(l - lo) + 1` is up.
    pub fn to_vector(&self, lo: i64, hi: i64) -> DVector<C64> {
        let n = (hi - lo + 1).max(0) as usize;
        DVector::from_fn(2 * n, |r, _| {
            let l = lo + (r / 2) as i64;
            let spin = if r % 2 == 0 { Spin::Down } else { Spin::Up };
            self.amp(l, spin)
        })
    }

    /// Inverse of [`to_vector`](Self::to_vector), without norm validation.
    #[cfg(test)]
    pub(crate) fn from_vector(lo: i64, v: &DVector<C64>) -> SpinorState {
        let amps = (0..v.len() / 2)
            .map(|i| {
                let mut a = [C64::new(0.0, 0.0); 2];
                a[DOWN] = v[2 * i];
                a[UP] = v[2 * i + 1];
                a
            })
            .collect();
        SpinorState::from_raw(lo, amps)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct SpinorStateRecord {
    schema: String,
    l_min: i64,
    /// `[re_down, im_down, re_up, im_up]` per site.
    amps: Vec<[f64; 4]>,
}

impl TryFrom<SpinorStateRecord> for SpinorState {
    type Error = Error;

    fn try_from(r: SpinorStateRecord) -> Result<Self> {
        if r.schema != SPINOR_STATE_SCHEMA {
            return Err(Error::Schema(format!(
                "expected schema {SPINOR_STATE_SCHEMA}, found {}",
                r.schema
            )));
        }
        if r.amps.is_empty() {
            return Err(Error::Schema("state has no amplitudes".into()));
        }
        let amps = r
            .amps
            .iter()
            .map(|a| {
                let mut s = [C64::new(0.0, 0.0); 2];
                s[DOWN] = C64::new(a[0], a[1]);
                s[UP] = C64::new(a[2], a[3]);
                s
            })
            .collect();
        SpinorState::new(r.l_min, amps)
    }
}

impl From<SpinorState> for SpinorStateRecord {
    fn from(s: SpinorState) -> Self {
        SpinorStateRecord {
            schema: SPINOR_STATE_SCHEMA.into(),
            l_min: s.l_min,
            amps: s
                .amps
                .iter()
                .map(|a| [a[DOWN].re, a[DOWN].im, a[UP].re, a[UP].im])
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trims_empty_edges() {
        let z = c(0.0, 0.0);
        let s = SpinorState::new(-2, vec![[z, z], [z, c(1.0, 0.0)], [z, c(1e-13, 0.0)]]).unwrap();
        assert_eq!((s.l_min(), s.l_max()), (-1, -1));
        assert_eq!(s.amp(-1, Spin::Down), c(1.0, 0.0));
    }

    #[test]
    fn rejects_unnormalized() {
        let z = c(0.0, 0.0);
        assert!(matches!(
            SpinorState::new(0, vec![[c(0.5, 0.0), z]]),
            Err(Error::NotNormalized { .. })
        ));
        let s = SpinorState::normalized(0, vec![[c(0.5, 0.0), c(0.0, 0.5)]]).unwrap();
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = SpinorState::new(3, vec![[c(0.0, h), c(h, 0.0)]]).unwrap();
        let text = s.to_json().unwrap();
        assert!(text.contains(SPINOR_STATE_SCHEMA));
        let back = SpinorState::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json().unwrap(), text);
        // the record lists down before up
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["amps"][0][0].as_f64().unwrap(), s.amp(3, Spin::Down).re);
    }

    #[test]
    fn json_rejects_wrong_schema() {
        let text = r#"{"schema":"other","l_min":0,"amps":[[1,0,0,0]]}"#;
        assert!(SpinorState::from_json(text).is_err());
    }

    #[test]
    fn vector_round_trip_and_ordering() {
        let s = SpinorState::normalized(1, vec![[c(1.0, 0.0), c(2.0, 0.0)], [c(0.0, 3.0), c(0.0, 0.0)]]).unwrap();
        let v = s.to_vector(0, 3);
        assert_eq!(v.len(), 8);
        assert_eq!(v[2], s.amp(1, Spin::Down));
        assert_eq!(v[3], s.amp(1, Spin::Up));
        let back = SpinorState::from_vector(0, &v);
        assert_eq!(back, s);
    }

    #[test]
    fn subwell_extent_and_bloch() {
        let s = SpinorState::normalized(0, vec![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        // |0, down> and |1, up>
        assert_eq!(s.subwell_extent(1e-12), Some((0, 3)));
        let b = s.bloch_components(0.25);
        assert_abs_diff_eq!(b[DOWN].re, (0.5f64).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(b[UP].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b[UP].im, -(0.5f64).sqrt(), epsilon = 1e-15);
    }
}
