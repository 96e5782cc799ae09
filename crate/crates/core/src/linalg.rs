//! Dense complex matrix helpers shared by every module.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance used when checking that inputs are Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest elementwise deviation `|M_ij - conj(M_ji)|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub fn ensure_hermitian(m: &CMatrix, tol: f64) -> Result<()> {
    ensure_square(m)?;
    let dev = hermitian_deviation(m);
    if dev > tol {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

pub fn ensure_dim(m: &CMatrix, expected: usize) -> Result<()> {
    if m.nrows() != expected || m.ncols() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: m.nrows(),
        });
    }
    Ok(())
}

/// `(M + M†) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Real part of `tr(A B)` without forming the product.
pub fn trace_product_re(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            let x = a[(i, k)];
            let y = b[(k, i)];
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

/// Full complex `tr(A B)`.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn trace_re(m: &CMatrix) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Spectral-norm-free unitarity check: max elementwise deviation of `U†U` from identity.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let p = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((p[(i, j)] - target).norm());
        }
    }
    worst
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `|ψ⟩⟨ψ|` for a column vector.
pub fn outer(psi: &[Complex64]) -> CMatrix {
    let n = psi.len();
    CMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj())
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { c(values[i], 0.0) } else { ZERO })
}

pub fn is_power_of_two(d: usize) -> bool {
    d > 0 && d & (d - 1) == 0
}

pub fn to_real(m: &CMatrix) -> RMatrix {
    m.map(|z| z.re)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| c(x, 0.0))
}
