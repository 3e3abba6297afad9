//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, Vector2};
use spinlat::dynamics::SpinorState;
use spinlat::model::Spin;
use spinlat::C64;

/// Number of eigenvalues of the symmetric tridiagonal matrix `(diag, off)`
/// below `x`, from the signs of the LDL^T pivots.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        d = diag[i] - x - b2 / d;
        if d == 0.0 {
            d = -1e-300;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn lowest_eigenvalue(diag: &[f64], off: &[f64]) -> f64 {
    let radius: f64 = off.iter().map(|o| 2.0 * o.abs()).fold(0.0, f64::max);
    let mut lo = diag.iter().cloned().fold(f64::INFINITY, f64::min) - radius - 1.0;
    let mut hi = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + radius + 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

const MATHIEU_TERMS: usize = 60;

/// Mathieu characteristic value `a_0(q)` of `y'' + (a - 2 q cos 2x) y = 0`.
pub fn mathieu_a0(q: f64) -> f64 {
    let diag: Vec<f64> = (0..MATHIEU_TERMS).map(|k| (2.0 * k as f64).powi(2)).collect();
    let mut off = vec![q; MATHIEU_TERMS - 1];
    off[0] = std::f64::consts::SQRT_2 * q;
    lowest_eigenvalue(&diag, &off)
}

/// `a_1(q)`, from the `cos((2k+1)x)` basis.
pub fn mathieu_a1(q: f64) -> f64 {
    let mut diag: Vec<f64> = (0..MATHIEU_TERMS).map(|k| (2.0 * k as f64 + 1.0).powi(2)).collect();
    diag[0] += q;
    lowest_eigenvalue(&diag, &vec![q; MATHIEU_TERMS - 1])
}

/// `b_1(q)`, from the `sin((2k+1)x)` basis.
pub fn mathieu_b1(q: f64) -> f64 {
    let mut diag: Vec<f64> = (0..MATHIEU_TERMS).map(|k| (2.0 * k as f64 + 1.0).powi(2)).collect();
    diag[0] -= q;
    lowest_eigenvalue(&diag, &vec![q; MATHIEU_TERMS - 1])
}

/// Ground band of `-(1/pi^2) d^2/dz^2 - depth cos(2 pi z)` at the zone
/// centre and edge. With `x = pi z` this is Mathieu's equation with
/// `q = -depth / 2`; `a_0` is even in `q` and `a_1(-q) = b_1(q)`.
pub fn ground_band_edges(depth: f64) -> (f64, f64) {
    let q = depth / 2.0;
    (mathieu_a0(q), mathieu_a1(q).min(mathieu_b1(q)))
}

/// `exp(m)` by scaling and squaring of a degree-20 Taylor polynomial.
pub fn expm(m: &DMatrix<C64>) -> DMatrix<C64> {
    let norm = m.iter().map(|c| c.norm()).sum::<f64>();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m / C64::from(2f64.powi(squarings as i32));
    let n = m.nrows();
    let mut term = DMatrix::<C64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=20 {
        term = &term * &scaled / C64::from(k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-i h t)`.
pub fn propagate(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    expm(&(h * C64::new(0.0, -t)))
}

/// `(psi_up(q), psi_down(q))` with `psi_s(q) = sum_l c_{l,s} e^{-i 2 pi l q}`.
pub fn dft(state: &SpinorState, q: f64) -> Vector2<C64> {
    let mut v = Vector2::zeros();
    for l in state.l_min()..=state.l_max() {
        let e = C64::cis(-TAU * l as f64 * q);
        v[0] += state.amp(l, Spin::Up) * e;
        v[1] += state.amp(l, Spin::Down) * e;
    }
    v
}

/// Interleaved ring vector (`2l` down, `2l + 1` up) transformed to `q`.
pub fn dft_ring(v: &DVector<C64>, q: f64) -> Vector2<C64> {
    let mut out = Vector2::zeros();
    for l in 0..v.len() / 2 {
        let e = C64::cis(-TAU * l as f64 * q);
        out[0] += v[2 * l + 1] * e;
        out[1] += v[2 * l] * e;
    }
    out
}

/// Scalar chain with hopping `hopping / 2` and potential `force * l` on sites
/// `l_min..l_min + n`, evolved from `|0>`.
pub fn scalar_chain(segments: &[(f64, f64, f64)], l_min: i64, n: usize) -> Vec<C64> {
    let mut psi = DVector::<C64>::zeros(n);
    psi[(-l_min) as usize] = C64::from(1.0);
    for &(duration, hopping, force) in segments {
        let mut h = DMatrix::<C64>::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = C64::from(force * (l_min + i as i64) as f64);
            if i + 1 < n {
                h[(i, i + 1)] = C64::from(0.5 * hopping);
                h[(i + 1, i)] = C64::from(0.5 * hopping);
            }
        }
        psi = propagate(&h, duration) * psi;
    }
    psi.iter().copied().collect()
}

pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}
