//! Small dense-matrix helpers shared across modules.

use nalgebra::linalg::SymmetricEigen;

use crate::{C64, CMatrix, Error, Result};

/// Max absolute deviation of `u* u` from the identity.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let product = u.adjoint() * u;
    let n = u.nrows();
    let mut defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            defect = defect.max((product[(i, j)] - expected).norm());
        }
    }
    defect
}

/// Error unless `u` is square and unitary within `tol`.
pub fn require_unitary(u: &CMatrix, tol: f64) -> Result<()> {
    if u.nrows() != u.ncols() {
        return Err(Error::Dimension(format!(
            "network matrix must be square, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let defect = unitarity_defect(u);
    if defect > tol {
        return Err(Error::Validation(format!(
            "matrix is not unitary: defect {defect:.3e} exceeds {tol:.1e}"
        )));
    }
    Ok(())
}

/// Max absolute deviation of `m` from its own adjoint.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut defect: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    defect
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let eigen = SymmetricEigen::new(m.clone());
    let mut values: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m)
        .first()
        .copied()
        .unwrap_or(0.0)
}

/// Trace norm (sum of absolute eigenvalues) of a Hermitian matrix.
pub fn hermitian_trace_norm(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).iter().map(|v| v.abs()).sum()
}
