//! Conversions between `ndarray` storage and `faer`, plus the dense LU
//! solves shared by the operator and spectra modules.

use crate::error::{Error, Result};
use faer::prelude::*;
use faer::Mat;
use ndarray::Array2;
use num_complex::Complex64;

pub(crate) fn to_faer(a: &Array2<Complex64>) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| {
        let z = a[(i, j)];
        c64::new(z.re, z.im)
    })
}

pub(crate) fn from_faer(m: &Mat<c64>) -> Array2<Complex64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| {
        let z = m[(i, j)];
        Complex64::new(z.re, z.im)
    })
}

/// Solve `A·X = B` by partial-pivot LU.
pub(crate) fn solve(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    if a.nrows() != a.ncols() || a.nrows() != b.nrows() {
        return Err(Error::Dimension(format!(
            "solve expects square A matching B rows, got {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let lu = to_faer(a).partial_piv_lu();
    let x = lu.solve(to_faer(b));
    let out = from_faer(&x);
    if !out.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Convergence("LU solve produced non-finite entries".into()));
    }
    Ok(out)
}

/// Solve `X·A = B`, i.e. `X = B·A⁻¹`, via the transposed system.
pub(crate) fn solve_right(b: &Array2<Complex64>, a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let x_t = solve(&a.t().to_owned(), &b.t().to_owned())?;
    Ok(x_t.t().to_owned())
}

/// Matrix inverse; [`Error::Convergence`] when numerically singular.
pub(crate) fn inverse(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    let eye = Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
    });
    solve(a, &eye)
}
