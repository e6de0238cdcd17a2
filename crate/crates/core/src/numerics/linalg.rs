use crate::{Error, Result, C64};
use nalgebra::{ComplexField, DMatrix, DVector};

fn pivoted_solve<T: ComplexField<RealField = f64> + Copy>(a: DMatrix<T>, b: DVector<T>) -> Result<DVector<T>> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(Error::Domain(format!("expected square system, got {}x{} with rhs {}", n, a.ncols(), b.len())));
    }
    let scale = a.iter().map(|v| v.modulus()).fold(0.0, f64::max);
    let lu = a.clone().full_piv_lu();
    let pivot = lu.u().diagonal().iter().map(|v| v.modulus()).fold(f64::INFINITY, f64::min);
    if n > 0 && !(pivot >= 1e-14 * scale) {
        return Err(Error::Singular { pivot, scale });
    }
    let x = lu.solve(&b).ok_or(Error::Singular { pivot, scale })?;
    // One step of iterative refinement.
    let r = &b - &a * &x;
    let dx = lu.solve(&r).ok_or(Error::Singular { pivot, scale })?;
    Ok(x + dx)
}

/// Solves `A x = b` for a dense real `A` (row-major rows) by fully pivoted elimination.
pub fn solve_dense(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = a.len();
    let m = DMatrix::from_fn(n, n, |i, j| a[i].get(j).copied().unwrap_or(f64::NAN));
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::Domain("matrix is not square".into()));
    }
    Ok(pivoted_solve(m, DVector::from_column_slice(b))?.iter().copied().collect())
}

/// Complex counterpart of [`solve_dense`].
pub fn solve_dense_complex(a: &[Vec<C64>], b: &[C64]) -> Result<Vec<C64>> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::Domain("matrix is not square".into()));
    }
    let m = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    Ok(pivoted_solve(m, DVector::from_column_slice(b))?.iter().copied().collect())
}
