//! Propagators of Hermitian generators.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};

use crate::C64;

/// `exp(-i t H)` for Hermitian `H`, via its eigendecomposition.
pub fn expm_hermitian(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let eig = SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| C64::cis(-e * t)));
    v * phases * v.adjoint()
}

/// `exp(-i t H) psi` without forming the propagator.
pub fn apply_expm_hermitian(h: &DMatrix<C64>, t: f64, psi: &DVector<C64>) -> DVector<C64> {
    let eig = SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let mut coeffs = v.adjoint() * psi;
    for (c, e) in coeffs.iter_mut().zip(eig.eigenvalues.iter()) {
        *c *= C64::cis(-e * t);
    }
    v * coeffs
}

/// Closed-form `exp(-i t h)` for a Hermitian 2x2 `h`.
pub fn expm2(h: &Matrix2<C64>, t: f64) -> Matrix2<C64> {
    let a = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
    let z = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
    let x = h[(0, 1)];
    let r = (z * z + x.norm_sqr()).sqrt();
    let (c, s_over_r) = if r * t.abs() < 1e-8 {
        // sin(r t) / r to second order
        (1.0 - 0.5 * (r * t).powi(2), t * (1.0 - (r * t).powi(2) / 6.0))
    } else {
        ((r * t).cos(), (r * t).sin() / r)
    };
    let i = C64::i();
    let traceless = Matrix2::new(C64::from(z), x, x.conj(), C64::from(-z));
    (Matrix2::identity() * C64::from(c) - traceless * (i * s_over_r)) * C64::cis(-a * t)
}

/// Largest entry of `|U^dagger U - 1|`.
pub fn unitarity_error(u: &DMatrix<C64>) -> f64 {
    let d = u.adjoint() * u - DMatrix::identity(u.nrows(), u.ncols());
    d.iter().map(|x| x.norm()).fold(0.0, f64::max)
}
