//! Matrix permanents and the row/column expansion used by the probability
//! formulas.
//!
//! Two kernels are provided on purpose: the Ryser inclusion-exclusion kernel
//! is the production path, the brute-force sum over permutations is the
//! oracle it is tested against. Repeated-index permanents go through an
//! explicit `N x N` expansion ([`expanded_submatrix`]) followed by either
//! kernel; at desk scale nothing faster is needed.

use crate::combinatorics::{enumerate_permutations, Configuration};
use crate::{C64, CMatrix, Error, Result};

/// Largest matrix accepted by [`permanent_ryser`].
pub const MAX_RYSER_DIM: usize = 20;

/// Largest matrix accepted by [`permanent_naive`].
pub const MAX_NAIVE_DIM: usize = 8;

fn require_square(a: &CMatrix, max_dim: usize, kernel: &str) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension(format!(
            "permanent of a non-square {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    if n > max_dim {
        return Err(Error::SizeLimit(format!(
            "{kernel} permanent limited to n <= {max_dim}, got {n}"
        )));
    }
    Ok(n)
}

/// Permanent by Ryser's inclusion-exclusion formula with Gray-code subset
/// iteration and running row sums, `O(2^n n)` arithmetic.
pub fn permanent_ryser(a: &CMatrix) -> Result<C64> {
    let n = require_square(a, MAX_RYSER_DIM, "Ryser")?;
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let mut row_sums = vec![C64::new(0.0, 0.0); n];
    let mut total = C64::new(0.0, 0.0);
    let mut prev_gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let gray = k ^ (k >> 1);
        let changed = gray ^ prev_gray;
        let col = changed.trailing_zeros() as usize;
        if gray & changed != 0 {
            for (i, sum) in row_sums.iter_mut().enumerate() {
                *sum += a[(i, col)];
            }
        } else {
            for (i, sum) in row_sums.iter_mut().enumerate() {
                *sum -= a[(i, col)];
            }
        }
        prev_gray = gray;
        let product: C64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 0 {
            total += product;
        } else {
            total -= product;
        }
    }
    // overall (-1)^n from pairing with the (-1)^{|S|} inside the loop
    if n % 2 == 0 {
        Ok(total)
    } else {
        Ok(-total)
    }
}

/// Permanent by direct summation over all `n!` permutations. Oracle kernel.
pub fn permanent_naive(a: &CMatrix) -> Result<C64> {
    let n = require_square(a, MAX_NAIVE_DIM, "naive")?;
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let mut total = C64::new(0.0, 0.0);
    for sigma in enumerate_permutations(n)? {
        let mut product = C64::new(1.0, 0.0);
        for i in 0..n {
            product *= a[(i, sigma.apply(i))];
        }
        total += product;
    }
    Ok(total)
}

/// The `N x N` matrix `U[rows|cols]` with row `k` of `u` repeated
/// `rows_k` times and column `l` repeated `cols_l` times, both in
/// nondecreasing mode order.
pub fn expanded_submatrix(
    u: &CMatrix,
    rows: &Configuration,
    cols: &Configuration,
) -> Result<CMatrix> {
    if u.nrows() != u.ncols() {
        return Err(Error::Dimension(format!(
            "network matrix must be square, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let m = u.nrows();
    if rows.mode_count() != m || cols.mode_count() != m {
        return Err(Error::Dimension(format!(
            "configurations must have {m} modes, got {} and {}",
            rows.mode_count(),
            cols.mode_count()
        )));
    }
    if rows.total() != cols.total() {
        return Err(Error::Dimension(format!(
            "row total {} differs from column total {}",
            rows.total(),
            cols.total()
        )));
    }
    let row_modes = rows.slot_modes();
    let col_modes = cols.slot_modes();
    let n = row_modes.len();
    Ok(CMatrix::from_fn(n, n, |i, j| u[(row_modes[i], col_modes[j])]))
}
