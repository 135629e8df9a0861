//! Internal (non-network) states of the bosons and the detector model.
//!
//! The network only moves particles between modes; interference quality is
//! decided by the internal states living in a `d`-dimensional space per
//! particle and by the detector sensitivities `Gamma_j` that filter those
//! states on detection. This module holds both representations of the
//! internal state (a pure product of per-particle vectors, or a full density
//! matrix on the `d^N`-dimensional tensor space) plus the Gram matrix of
//! detector-normalized overlaps.

use crate::combinatorics::{young_subgroup, Configuration, Permutation};
use crate::linalg::{hermiticity_defect, min_hermitian_eigenvalue};
use crate::{C64, CMatrix, CVector, Error, Result};

/// Largest tensor-space dimension `d^N` accepted by density-matrix paths.
pub const MAX_TENSOR_DIM: usize = 4096;

const HERMITICITY_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const UNIT_NORM_TOL: f64 = 1e-12;

/// `d^N` with the configured cap enforced.
pub fn tensor_dim(internal_dim: usize, particles: usize) -> Result<usize> {
    internal_dim
        .checked_pow(particles as u32)
        .filter(|&dim| dim <= MAX_TENSOR_DIM)
        .ok_or_else(|| {
            Error::SizeLimit(format!(
                "tensor dimension {internal_dim}^{particles} exceeds {MAX_TENSOR_DIM}"
            ))
        })
}

/// Index of the basis vector `P_sigma |j_0 .. j_{N-1}>` given the index of
/// `|j_0 .. j_{N-1}>`, with slot 0 the most significant base-`d` digit.
///
/// `P_sigma` moves the content of slot `a` to slot `sigma(a)`, i.e. the new
/// slot `a` holds digit `j_{sigma^{-1}(a)}`.
pub fn permuted_tensor_index(sigma: &Permutation, index: usize, d: usize, n: usize) -> usize {
    let mut digits = vec![0usize; n];
    let mut rest = index;
    for slot in (0..n).rev() {
        digits[slot] = rest % d;
        rest /= d;
    }
    let inv = sigma.inverse();
    let mut out = 0usize;
    for slot in 0..n {
        out = out * d + digits[inv.apply(slot)];
    }
    out
}

/// Identical detectors with per-internal-basis-state sensitivities
/// `0 <= Gamma_j <= 1`, diagonal in the chosen internal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorModel {
    sensitivities: Vec<f64>,
}

impl DetectorModel {
    pub fn new(sensitivities: Vec<f64>) -> Result<Self> {
        if sensitivities.is_empty() {
            return Err(Error::Validation("detector needs at least one sensitivity".into()));
        }
        for (j, &g) in sensitivities.iter().enumerate() {
            if !(0.0..=1.0).contains(&g) {
                return Err(Error::Validation(format!(
                    "sensitivity Gamma_{j} = {g} outside [0, 1]"
                )));
            }
        }
        Ok(DetectorModel { sensitivities })
    }

    /// Unit sensitivity for every internal basis state.
    pub fn ideal(internal_dim: usize) -> Self {
        DetectorModel { sensitivities: vec![1.0; internal_dim] }
    }

    /// The same sensitivity `gamma` for every internal basis state.
    pub fn uniform(internal_dim: usize, gamma: f64) -> Result<Self> {
        DetectorModel::new(vec![gamma; internal_dim])
    }

    pub fn internal_dim(&self) -> usize {
        self.sensitivities.len()
    }

    pub fn sensitivities(&self) -> &[f64] {
        &self.sensitivities
    }

    /// `<a| Gamma |b>` in the detector eigenbasis.
    pub fn weighted_overlap(&self, a: &CVector, b: &CVector) -> C64 {
        self.sensitivities
            .iter()
            .zip(a.iter().zip(b.iter()))
            .map(|(&g, (x, y))| g * x.conj() * y)
            .sum()
    }

    /// Product weight `prod_alpha Gamma_{j_alpha}` of a tensor basis index.
    pub fn tensor_weight(&self, index: usize, particles: usize) -> f64 {
        let d = self.sensitivities.len();
        let mut rest = index;
        let mut weight = 1.0;
        for _ in 0..particles {
            weight *= self.sensitivities[rest % d];
            rest /= d;
        }
        weight
    }
}

/// `N` unit vectors in the `d`-dimensional internal space, one per particle
/// slot.
#[derive(Debug, Clone, PartialEq)]
pub struct PureProductState {
    vectors: Vec<CVector>,
}

impl PureProductState {
    pub fn new(vectors: Vec<CVector>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Validation("need at least one particle".into()));
        }
        let d = vectors[0].len();
        for (alpha, v) in vectors.iter().enumerate() {
            if v.len() != d {
                return Err(Error::Dimension(format!(
                    "internal vector {alpha} has dimension {} instead of {d}",
                    v.len()
                )));
            }
            let norm = v.norm();
            if (norm - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::Validation(format!(
                    "internal vector {alpha} has norm {norm}, expected 1"
                )));
            }
        }
        Ok(PureProductState { vectors })
    }

    /// All `n` particles in the same internal basis state `j` of a
    /// `d`-dimensional space.
    pub fn identical_basis(n: usize, d: usize, j: usize) -> Result<Self> {
        let mut v = CVector::zeros(d);
        v[j] = C64::new(1.0, 0.0);
        PureProductState::new(vec![v; n])
    }

    pub fn particle_count(&self) -> usize {
        self.vectors.len()
    }

    pub fn internal_dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    /// The product vector `phi_0 (x) ... (x) phi_{N-1}` in the tensor space.
    pub fn product_vector(&self) -> Result<CVector> {
        let d = self.internal_dim();
        let n = self.particle_count();
        let dim = tensor_dim(d, n)?;
        let mut v = CVector::from_element(1, C64::new(1.0, 0.0));
        for phi in &self.vectors {
            v = v.kronecker(phi);
        }
        debug_assert_eq!(v.len(), dim);
        Ok(v)
    }
}

/// Detector-normalized Gram matrix `G_{ab} = <phi~_a| Gamma |phi~_b>` with
/// `|phi~> = |phi> / sqrt(<phi| Gamma |phi>)`.
///
/// Hermitian, positive semidefinite, unit diagonal by construction. Its
/// permanent over `N!` is the symmetric-subspace probability of a pure
/// product input.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    entries: CMatrix,
}

impl GramMatrix {
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

/// Build the Gram matrix of a pure product state under a detector model.
///
/// Errors with a degenerate-detection condition if some state has vanishing
/// detection weight `<phi| Gamma |phi>`.
pub fn gram_matrix(states: &PureProductState, det: &DetectorModel) -> Result<GramMatrix> {
    if det.internal_dim() != states.internal_dim() {
        return Err(Error::Dimension(format!(
            "detector dimension {} does not match internal dimension {}",
            det.internal_dim(),
            states.internal_dim()
        )));
    }
    let n = states.particle_count();
    let mut normalized = Vec::with_capacity(n);
    for (alpha, phi) in states.vectors().iter().enumerate() {
        let weight = det.weighted_overlap(phi, phi).re;
        if weight <= 0.0 {
            return Err(Error::DegenerateDetection(format!(
                "state {alpha} has vanishing detection weight"
            )));
        }
        normalized.push(phi / C64::new(weight.sqrt(), 0.0));
    }
    let entries = CMatrix::from_fn(n, n, |a, b| det.weighted_overlap(&normalized[a], &normalized[b]));
    Ok(GramMatrix { entries })
}

/// Mixed internal state: a density matrix on the `d^N` tensor space,
/// invariant under the Young subgroup of its declared input configuration.
///
/// Construction symmetrizes the input over that subgroup; whether the
/// symmetrization actually changed the state is recorded in
/// [`MixedInternalState::symmetrization_delta`].
#[derive(Debug, Clone)]
pub struct MixedInternalState {
    density: CMatrix,
    internal_dim: usize,
    particle_count: usize,
    input_config: Configuration,
    symmetrization_delta: f64,
}

impl MixedInternalState {
    /// Validate and Young-symmetrize a density matrix for the given input
    /// configuration.
    pub fn new(density: CMatrix, internal_dim: usize, input_config: Configuration) -> Result<Self> {
        let particles = input_config.total();
        let dim = tensor_dim(internal_dim, particles)?;
        if density.nrows() != dim || density.ncols() != dim {
            return Err(Error::Dimension(format!(
                "density must be {dim}x{dim} for d={internal_dim}, N={particles}; got {}x{}",
                density.nrows(),
                density.ncols()
            )));
        }
        let herm = hermiticity_defect(&density);
        if herm > HERMITICITY_TOL {
            return Err(Error::Validation(format!(
                "density is not Hermitian: defect {herm:.3e}"
            )));
        }
        let trace = density.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::Validation(format!("density trace {trace} is not 1")));
        }
        let symmetrized = young_twirl(&density, internal_dim, &input_config)?;
        let delta = (&symmetrized - &density).amax();
        let min_eig = min_hermitian_eigenvalue(&symmetrized);
        if min_eig < -PSD_TOL {
            return Err(Error::Validation(format!(
                "density is not positive semidefinite: min eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(MixedInternalState {
            density: symmetrized,
            internal_dim,
            particle_count: particles,
            input_config,
            symmetrization_delta: delta,
        })
    }

    /// `rho = (x)_alpha |phi_alpha><phi_alpha|`, the product density of
    /// independent particles. Declared configuration is one particle per
    /// mode, so no symmetrization applies.
    pub fn product_density(states: &PureProductState) -> Result<Self> {
        let v = states.product_vector()?;
        let density = &v * v.adjoint();
        Ok(MixedInternalState {
            density,
            internal_dim: states.internal_dim(),
            particle_count: states.particle_count(),
            input_config: Configuration::new(vec![1; states.particle_count()]),
            symmetrization_delta: 0.0,
        })
    }

    /// Internal state of pure per-particle vectors fed into possibly
    /// repeated input modes: the normalized Young projection of the product
    /// vector.
    ///
    /// This is the state actually prepared by repeated bosonic creation
    /// operators, and differs from the group average of
    /// [`symmetrize_young`] whenever states within one mode are distinct.
    pub fn young_projected_product(
        states: &PureProductState,
        input_config: &Configuration,
    ) -> Result<Self> {
        if input_config.total() != states.particle_count() {
            return Err(Error::Dimension(format!(
                "configuration holds {} particles but state has {}",
                input_config.total(),
                states.particle_count()
            )));
        }
        let d = states.internal_dim();
        let n = states.particle_count();
        let v = states.product_vector()?;
        let group = young_subgroup(input_config)?;
        let mut projected = CVector::zeros(v.len());
        for pi in &group {
            for idx in 0..v.len() {
                projected[permuted_tensor_index(pi, idx, d, n)] += v[idx];
            }
        }
        projected /= C64::new(group.len() as f64, 0.0);
        let norm = projected.norm();
        if norm < 1e-14 {
            return Err(Error::Validation(
                "product vector is annihilated by the Young projection".into(),
            ));
        }
        projected /= C64::new(norm, 0.0);
        let density = &projected * projected.adjoint();
        Ok(MixedInternalState {
            density,
            internal_dim: d,
            particle_count: n,
            input_config: input_config.clone(),
            symmetrization_delta: 0.0,
        })
    }

    pub fn density(&self) -> &CMatrix {
        &self.density
    }

    pub fn internal_dim(&self) -> usize {
        self.internal_dim
    }

    pub fn particle_count(&self) -> usize {
        self.particle_count
    }

    pub fn input_config(&self) -> &Configuration {
        &self.input_config
    }

    /// Largest entry change caused by the Young symmetrization at
    /// construction; zero means the input was already symmetric.
    pub fn symmetrization_delta(&self) -> f64 {
        self.symmetrization_delta
    }
}

/// Group average `rho' = (1/mu) sum_{pi in S_n} P_pi rho P_pi^+` over the
/// Young subgroup of `input_config`. Idempotent and trace-preserving.
pub fn symmetrize_young(
    density: &CMatrix,
    internal_dim: usize,
    input_config: &Configuration,
) -> Result<CMatrix> {
    young_twirl(density, internal_dim, input_config)
}

fn young_twirl(
    density: &CMatrix,
    internal_dim: usize,
    input_config: &Configuration,
) -> Result<CMatrix> {
    let n = input_config.total();
    let dim = tensor_dim(internal_dim, n)?;
    if density.nrows() != dim {
        return Err(Error::Dimension(format!(
            "density dimension {} does not match d^N = {dim}",
            density.nrows()
        )));
    }
    let group = young_subgroup(input_config)?;
    if group.len() == 1 {
        return Ok(density.clone());
    }
    let mut out = CMatrix::zeros(dim, dim);
    for pi in &group {
        let inv = pi.inverse();
        // index map a -> P_{pi^{-1}} a, so that entry (a, b) of the
        // conjugated matrix is rho[pi^{-1} a, pi^{-1} b]
        let back: Vec<usize> = (0..dim)
            .map(|idx| permuted_tensor_index(&inv, idx, internal_dim, n))
            .collect();
        for a in 0..dim {
            for b in 0..dim {
                out[(a, b)] += density[(back[a], back[b])];
            }
        }
    }
    out /= C64::new(group.len() as f64, 0.0);
    Ok(out)
}
