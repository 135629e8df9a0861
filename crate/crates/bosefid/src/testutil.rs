//! Shared helpers for unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::internal_state::PureProductState;
use crate::{C64, CMatrix, CVector};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn basis(d: usize, j: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[j] = c(1.0, 0.0);
    v
}

pub fn random_unit(d: usize, rng: &mut ChaCha12Rng) -> CVector {
    let v = CVector::from_fn(d, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let norm = v.norm();
    v / c(norm, 0.0)
}

pub fn random_pure(n: usize, d: usize, rng: &mut ChaCha12Rng) -> PureProductState {
    PureProductState::new((0..n).map(|_| random_unit(d, rng)).collect()).unwrap()
}

/// 50:50 beamsplitter `(1/sqrt(2)) [[1, 1], [1, -1]]`.
pub fn balanced_beamsplitter() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
}

/// Two photons in different modes with internal overlap `cos(theta)`.
pub fn overlap_pair(theta: f64) -> PureProductState {
    PureProductState::new(vec![
        basis(2, 0),
        CVector::from_vec(vec![c(theta.cos(), 0.0), c(theta.sin(), 0.0)]),
    ])
    .unwrap()
}
